"""Report writer base class."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.
from __future__ import annotations

from nlrepr.utils.base import NlreprBase


class WriterBase(NlreprBase):
    """Sink for the serialized report of a run and its CSV tables."""

    def write(self, output: str, resources, **kw):
        """
        Persist one run.

        Parameters
        ----------
        output : str
            The report, already serialized to JSON.
        resources : dict
            Task resources; ``outputs`` maps table file names to CSV bytes.
        """
        raise NotImplementedError()
