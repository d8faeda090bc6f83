"""Base task class and the task registry."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import collections
import os
import sys
import typing as t

if sys.version_info < (3, 10):
    from importlib_metadata import entry_points  # type:ignore[import-not-found]
else:
    from importlib.metadata import entry_points
from traitlets import Bool
from traitlets.config import get_config
from traitlets.log import get_logger
from traitlets.utils.importstring import import_item

from nlrepr.utils.base import NlreprBase
from nlrepr.utils.io import SCHEMA, frame_to_csv

from .document import ProblemDocument

__all__ = [
    "Task",
    "TaskNameError",
    "check",
    "get_task",
    "get_task_names",
]


class TaskNameError(NameError):
    """A task name error."""


class TaskDisabledError(ValueError):
    """A task disabled error."""


class ResourcesDict(collections.defaultdict):  # type:ignore[type-arg]
    """A default dict for resources."""

    def __missing__(self, key):
        """Handle missing value."""
        return ""


def check(name: str, value: float, limit: float, passed: bool | None = None) -> dict[str, t.Any]:
    """A report entry: ``value`` must not exceed ``limit`` unless ``passed`` says otherwise."""
    if passed is None:
        passed = bool(value <= limit)
    return {"name": name, "passed": bool(passed), "value": value, "limit": limit}


class Task(NlreprBase):
    """
    One command: reads a problem document, runs the computation and
    returns a JSON-ready report together with its CSV tables.
    """

    #: Command path as typed on the command line.
    command = ""

    enabled = Bool(True, help="Disable this task (and any tasks inherited from it).").tag(
        config=True
    )

    @property
    def output_name(self) -> str:
        return self.command.replace(" ", "_")

    def _init_resources(self, resources):
        if resources is None:
            resources = ResourcesDict()
        if not isinstance(resources, ResourcesDict):
            new_resources = ResourcesDict()
            new_resources.update(resources)
            resources = new_resources
        if "metadata" not in resources or resources["metadata"] == "":
            resources["metadata"] = ResourcesDict()
        resources.setdefault("outputs", {})
        return resources

    def add_table(self, resources, table: str, frame):
        """Attach ``frame`` as ``<name>_<table>.csv``."""
        filename = f"{self.output_name}_{table}.csv"
        resources["outputs"][filename] = frame_to_csv(frame).encode("utf-8")

    def from_filename(self, filename: str, resources=None, seed: int = 0):
        """Run the task on the problem document at ``filename``."""
        resources = self._init_resources(resources)
        path, basename = os.path.split(filename)
        resources["metadata"]["name"] = os.path.splitext(basename)[0]
        resources["metadata"]["path"] = path
        document = ProblemDocument.from_filename(filename, seed=seed, max_depth=self.max_depth)
        return self.from_document(document, resources)

    def from_document(self, document: ProblemDocument, resources=None):
        """Run the task on a loaded document.

        Returns
        -------
        report : dict
            Always carries ``schema``, ``command``, ``checks`` and ``passed``.
        resources : dict
            ``outputs`` maps CSV file names to their bytes.
        """
        resources = self._init_resources(resources)
        self.log.info("Running %s", self.command)
        body = self.run(document, resources)
        checks = body.pop("checks", [])
        report = {"schema": SCHEMA, "command": self.command, "checks": checks, **body}
        report["failed"] = [c["name"] for c in checks if not c["passed"]]
        report["passed"] = not report["failed"]
        return report, resources

    def run(self, document: ProblemDocument, resources) -> dict[str, t.Any]:
        raise NotImplementedError()


def _builtin_tasks() -> dict[str, str]:
    return {
        "tree gen": "nlrepr.tasks.tree.TreeGenTask",
        "axioms check": "nlrepr.tasks.axioms.AxiomsCheckTask",
        "repr solve": "nlrepr.tasks.representation.ReprSolveTask",
        "repr verify": "nlrepr.tasks.representation.ReprVerifyTask",
        "repr characterize": "nlrepr.tasks.representation.ReprCharacterizeTask",
        "stop solve": "nlrepr.tasks.stopping.StopSolveTask",
        "stop verify": "nlrepr.tasks.stopping.StopVerifyTask",
        "skorokhod solve": "nlrepr.tasks.skorokhod.SkorokhodSolveTask",
        "skorokhod verify": "nlrepr.tasks.skorokhod.SkorokhodVerifyTask",
        "skorokhod falsify": "nlrepr.tasks.skorokhod.SkorokhodFalsifyTask",
        "amput boundary": "nlrepr.tasks.american.AmputBoundaryTask",
        "amput sweep": "nlrepr.tasks.american.AmputSweepTask",
    }


def get_task(name, config=get_config()):  # noqa: B008
    """Given a command path or import path, return a class ready to be instantiated

    Command paths may be written with spaces or dashes (``repr solve``,
    ``repr-solve``). Tasks registered under the ``nlrepr.tasks`` entry point
    group are found as well.

    Raises TaskNameError if the task is not found or TaskDisabledError if not enabled
    """
    key = " ".join(name.replace("-", " ").split()).lower()
    builtin = _builtin_tasks()
    task = None
    if key in builtin:
        task = import_item(builtin[key])
    else:
        found = [e for e in entry_points(group="nlrepr.tasks") if e.name.replace("-", " ") == key]
        if found:
            task = found[0].load()
        elif "." in name:
            try:
                task = import_item(name)
            except ImportError:
                log = get_logger()
                log.error("Error importing %s", name, exc_info=True)  # noqa: G201
    if task is not None:
        if getattr(task(config=config), "enabled", True):
            return task
        raise TaskDisabledError('Task "%s" disabled in configuration' % (name))

    msg = 'Unknown command "{}", did you mean one of: {}?'.format(
        name, ", ".join(get_task_names())
    )
    raise TaskNameError(msg)


def get_task_names() -> list[str]:
    """Return the currently known command paths."""
    names = set(_builtin_tasks())
    names.update(e.name.replace("-", " ") for e in entry_points(group="nlrepr.tasks"))
    return sorted(names)
