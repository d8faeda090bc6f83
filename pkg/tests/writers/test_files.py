"""
Module with tests for files
"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import os

import pytest

from nlrepr.writers.files import FilesWriter
from tests.base import TestsBase


class Testfiles(TestsBase):
    """Contains test functions for files.py"""

    def test_basic_output(self):
        """Is FilesWriter basic output correct?"""

        # Work in a temporary directory.
        with self.create_temp_cwd():
            writer = FilesWriter()
            dest = writer.write('{"passed": true}\n', {}, name="z")

            assert dest == os.path.join(".", "z.json")
            with open("z.json", encoding="utf-8") as f:
                self.assertEqual(f.read(), '{"passed": true}\n')

    def test_tables(self):
        """Are the tables written next to the report?"""

        with self.create_temp_cwd():
            res = {"outputs": {"z_L.csv": b"node_id,value\n0,1\n", "z_U.csv": b"x\n"}}
            FilesWriter().write("{}", res, name="z")

            assert os.path.isfile("z.json")
            with open("z_L.csv", "rb") as f:
                self.assertEqual(f.read(), b"node_id,value\n0,1\n")
            assert os.path.isfile("z_U.csv")

    def test_build_dir(self):
        """Is the build directory created when missing?"""

        with self.create_temp_cwd():
            build_dir = os.path.join("out", "run")
            writer = FilesWriter(build_directory=build_dir)
            writer.write("{}", {"outputs": {"z_eta.csv": b"1\n"}}, name="z")

            assert os.path.isdir(build_dir)
            assert os.path.isfile(os.path.join(build_dir, "z.json"))
            assert os.path.isfile(os.path.join(build_dir, "z_eta.csv"))

    def test_build_dir_is_file(self):
        with self.create_temp_cwd():
            with open("taken", "w", encoding="utf-8") as f:
                f.write("")
            with pytest.raises(OSError):
                FilesWriter(build_directory="taken")

    def test_name_required(self):
        with self.create_temp_cwd(), pytest.raises(TypeError):
            FilesWriter().write("{}", {})
