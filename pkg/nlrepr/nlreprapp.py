#!/usr/bin/env python
"""nlrepr solves representation problems under non-linear expectations.

Command-line interface for the nlrepr tasks.
"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.
from __future__ import annotations

import json
import logging
import os
import sys
import typing as t

from traitlets import (
    DottedObjectName,
    Instance,
    Integer,
    List,
    TraitError,
    Type,
    Unicode,
    default,
    observe,
)
from traitlets.config import Application, Configurable
from traitlets.config.application import default_aliases as base_aliases
from traitlets.config.application import default_flags as base_flags
from traitlets.config.loader import ArgumentError
from traitlets.utils.importstring import import_item

from nlrepr import __version__, american, representation, skorokhod, stopping, tasks, writers

from .tasks.base import TaskDisabledError, TaskNameError, get_task, get_task_names
from .tasks.document import ProblemDocument
from .utils.base import NlreprBase
from .utils.exceptions import (
    ConditionViolated,
    EnumerationGuardError,
    NlreprError,
    NonTowerOperatorError,
    ParameterError,
    UncertifiedOperatorError,
)
from .utils.io import SCHEMA, dumps_report

#: Exit status of a run whose checks failed.
EXIT_FAILED = 1

#: Exit status of a run that never got to its checks.
EXIT_CONFIG = 2

#: Errors caused by the input rather than by the numerics.
CONFIG_ERRORS = (
    ParameterError,
    ConditionViolated,
    UncertifiedOperatorError,
    NonTowerOperatorError,
    EnumerationGuardError,
    TaskNameError,
    TaskDisabledError,
    TraitError,
)

#: ``NLREPR_LOG`` values.
LOG_LEVELS = {"off": logging.CRITICAL, "info": logging.INFO, "debug": logging.DEBUG}


nlrepr_aliases = {}
nlrepr_aliases.update(base_aliases)
nlrepr_aliases.update(
    {
        "config": "NlreprApp.problem_file",
        "settings": "NlreprApp.settings_file",
        "market": "NlreprApp.market_file",
        "operator": "NlreprApp.operator_file",
        "seed": "NlreprApp.seed",
        "writer": "NlreprApp.writer_class",
        "out": "FilesWriter.build_directory",
        "tol-root": "NlreprBase.tol_root",
        "tol-residual": "NlreprBase.tol_residual",
        "tol-check": "NlreprBase.tol_check",
        "max-depth": "NlreprBase.max_depth",
        "threads": "NlreprBase.threads",
        "strikes": "AmputSweepTask.strikes",
        "trials": "AxiomsCheckTask.trials",
    }
)

nlrepr_flags = {}
nlrepr_flags.update(base_flags)
nlrepr_flags.update(
    {
        "stdout": (
            {"NlreprApp": {"writer_class": "StdoutWriter"}},
            "Write the JSON report to stdout instead of files (tables are skipped).",
        ),
        "candidates": (
            {"AmericanPut": {"enumerate_candidates": True}},
            "Check every extended rule meeting the exercise criterion in a strike sweep.",
        ),
    }
)


class NlreprApp(Application):
    """Application running one nlrepr command on a problem document"""

    version = __version__
    name = "nlrepr"
    aliases = nlrepr_aliases
    flags = nlrepr_flags

    @default("log_level")
    def _log_level_default(self):
        value = os.environ.get("NLREPR_LOG", "info").strip().lower()
        return LOG_LEVELS.get(value, logging.INFO)

    classes = List()  # type:ignore[assignment]

    @default("classes")
    def _classes_default(self):
        classes: list[type[t.Any]] = [NlreprBase]
        for pkg in (tasks, writers, representation, stopping, skorokhod, american):
            for name in dir(pkg):
                cls = getattr(pkg, name)
                if isinstance(cls, type) and issubclass(cls, Configurable):
                    classes.append(cls)

        return classes

    description = Unicode(  # type:ignore[assignment]
        """Solve, verify and apply representation problems under
        non-linear conditional expectations on finite event trees.

        Every run writes a JSON report and its CSV tables. The exit status
        is 0 when all checks pass, 1 when a check fails and 2 when the
        input cannot be run."""
    )

    examples = Unicode(
        f"""
        Commands are {", ".join(get_task_names())}.

        > nlrepr repr solve --config problem.json --out results

        The report lands in results/repr_solve.json, L in results/repr_solve_L.csv.

        > nlrepr amput sweep --config crr.json --strikes 80:120:21

        > nlrepr axioms check --config op.json --stdout

        Tolerances and guards can also come from a settings file::

            c.NlreprBase.tol_root = 1e-12
            c.NlreprBase.threads = 4

        > nlrepr stop verify --config problem.json --settings nlrepr_config.py
        """
    )

    problem_file = Unicode(
        "", help="JSON problem document (tree, operator, processes, ...)."
    ).tag(config=True)

    settings_file = Unicode("", help="traitlets settings file (.py or .json).").tag(config=True)

    market_file = Unicode(
        "", help="JSON market (prices and rate, or a crr tree) merged into the document."
    ).tag(config=True)

    operator_file = Unicode("", help="JSON operator merged into the document.").tag(config=True)

    seed = Integer(0, help="Seed of every random draw of a run.").tag(config=True)

    command = Unicode("", help="The command to run, e.g. 'repr solve'.")

    # Writer specific variables
    writer = Instance(
        "nlrepr.writers.base.WriterBase",
        help="""Instance of the writer class used to write the
                      results of a run.""",
        allow_none=True,
    )
    writer_class = DottedObjectName(
        "FilesWriter",
        help="""Writer class used to write the
                                    results of a run""",
    ).tag(config=True)
    writer_aliases = {
        "fileswriter": "nlrepr.writers.files.FilesWriter",
        "stdoutwriter": "nlrepr.writers.stdout.StdoutWriter",
    }
    writer_factory = Type(allow_none=True)

    @observe("writer_class")
    def _writer_class_changed(self, change):
        new = change["new"]
        if new.lower() in self.writer_aliases:
            new = self.writer_aliases[new.lower()]
        self.writer_factory = import_item(new)

    def initialize(self, argv=None):
        """Initialize application, settings, command and writer"""
        self.init_syspath()
        try:
            super().initialize(argv)
        except SystemExit as e:
            # traitlets exits 1 on a bad command line
            if e.code == 1:
                self.exit(EXIT_CONFIG)
            raise
        try:
            self.init_settings()
            self.init_command()
            self.init_writer()
        except (TraitError, ArgumentError, OSError) as e:
            self.log.critical("Bad configuration: %s", e)
            self.exit(EXIT_CONFIG)

    def init_syspath(self):
        """Add the cwd to the sys.path ($PYTHONPATH)"""
        sys.path.insert(0, os.getcwd())

    def init_settings(self):
        """Load the settings file; command-line options still win."""
        if not self.settings_file:
            return
        path, filename = os.path.split(os.path.abspath(self.settings_file))
        if not os.path.isfile(self.settings_file):
            msg = f"settings file {self.settings_file!r} not found"
            raise OSError(msg)
        self.load_config_file(filename, path=path)

    def init_command(self):
        """Join positional arguments into the command; a trailing ``.json`` is the document."""
        words = list(self.extra_args)
        if words and words[-1].endswith(".json") and not self.problem_file:
            self.problem_file = words.pop()
        self.command = " ".join(words)

    def init_writer(self):
        """Initialize the writer (which is stateless)"""
        self._writer_class_changed({"new": self.writer_class})
        if self.writer_factory:
            self.writer = self.writer_factory(parent=self)

    def start(self):
        """Run start after initialization process has completed"""
        super().start()
        if not self.command:
            self.print_help()
            self.exit(EXIT_CONFIG)
        self.exit(self.run_command())

    def load_document(self, max_depth) -> ProblemDocument:
        """The problem document with the market and operator files merged in."""
        if self.problem_file:
            document = ProblemDocument.from_filename(
                self.problem_file, seed=self.seed, max_depth=max_depth
            )
        else:
            document = ProblemDocument({}, os.getcwd(), self.seed, max_depth)
        if self.operator_file:
            document.data["operator"] = {"file": os.path.abspath(self.operator_file)}
        if self.market_file:
            with open(self.market_file, encoding="utf-8") as f:
                market = json.load(f)
            if "kind" in market:
                document.data["tree"] = market
            else:
                if "tree" in market:
                    document.data["tree"] = market.pop("tree")
                document.data["market"] = market
        return document

    def error_report(self, error: Exception) -> dict[str, t.Any]:
        """Report of a run that failed before its checks."""
        details: dict[str, t.Any] = {"type": type(error).__name__, "message": str(error)}
        if isinstance(error, ConditionViolated):
            details.update(code=error.code, node=error.node, margin=error.margin)
        return {
            "schema": SCHEMA,
            "command": self.command,
            "error": details,
            "checks": [],
            "failed": [],
            "passed": False,
        }

    def run_command(self) -> int:
        """Run the command, write its outputs and return the exit status."""
        name = self.command.replace(" ", "_")
        try:
            cls = get_task(self.command, config=self.config)
            task = cls(parent=self)
            name = task.output_name
            self.log.info("Running %s on %s", self.command, self.problem_file or "<no document>")
            report, resources = task.from_document(self.load_document(task.max_depth))
        except (*CONFIG_ERRORS, OSError, json.JSONDecodeError) as e:
            self.log.error("%s: %s", type(e).__name__, e)
            self.write(self.error_report(e), {}, name)
            return EXIT_CONFIG
        except NlreprError as e:
            self.log.error("%s: %s", type(e).__name__, e, exc_info=True)  # noqa: G201
            self.write(self.error_report(e), {}, name)
            return EXIT_FAILED

        self.write(report, resources, name)
        if not report["passed"]:
            self.log.error("Failed checks: %s", ", ".join(report["failed"]))
            return EXIT_FAILED
        return 0

    def write(self, report, resources, name):
        if not self.writer:
            msg = "No writer object defined!"
            raise ValueError(msg)
        return self.writer.write(dumps_report(report), resources, name=name)


# -----------------------------------------------------------------------------
# Main entry point
# -----------------------------------------------------------------------------

main = launch_new_instance = NlreprApp.launch_instance
