"""Writer that stores reports and tables in a directory."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import os

from traitlets import Unicode, observe

from .base import WriterBase


class FilesWriter(WriterBase):
    """Writes ``<name>.json`` and the ``<name>_<table>.csv`` files of a run."""

    build_directory = Unicode(
        ".",
        help="""Directory receiving the report and its tables; created when missing.""",
    ).tag(config=True)

    @observe("build_directory")
    def _build_directory_changed(self, change):
        if change["new"]:
            self.ensure_directory(change["new"])

    def __init__(self, **kw):
        super().__init__(**kw)
        self._build_directory_changed({"new": self.build_directory})

    def ensure_directory(self, path, mode=0o755):
        """Create ``path`` (and parents) unless it is already a directory."""
        if os.path.isdir(path):
            return
        if os.path.exists(path):
            msg = f"{path!r} exists but is not a directory"
            raise OSError(msg)
        self.log.info("Making directory %s", path)
        os.makedirs(path, mode=mode, exist_ok=True)

    def write_tables(self, tables, directory):
        for filename, data in tables:
            dest = os.path.join(directory, filename)
            self.log.debug("Writing %i bytes to %s", len(data), dest)
            with open(dest, "wb") as f:
                f.write(data)

    def write(self, output, resources, name=None, **kw):
        """Write the report as ``<name>.json`` next to its tables; returns the report's path."""
        if name is None:
            msg = "FilesWriter.write() needs the output name"
            raise TypeError(msg)

        directory = self.build_directory or "."
        tables = sorted(resources.get("outputs", {}).items())
        if tables:
            self.log.info("Writing %i tables to %s", len(tables), directory)
            self.write_tables(tables, directory)

        dest = os.path.join(directory, name + ".json")
        self.log.info("Writing report to %s", dest)
        # LF line endings on every platform
        with open(dest, "w", encoding="utf-8", newline="\n") as f:
            f.write(output)
        return dest
