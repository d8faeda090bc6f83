"""Writer printing the report to standard output."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from nlrepr.utils import io

from .base import WriterBase


class StdoutWriter(WriterBase):
    """Prints the JSON report; tables are dropped."""

    def write(self, output, resources, **kw):
        tables = resources.get("outputs", {})
        if tables:
            self.log.info("Skipping %i tables when writing to stdout", len(tables))
        io.unicode_std_stream().write(output)
