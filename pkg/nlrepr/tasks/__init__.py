from .american import AmputBoundaryTask, AmputSweepTask
from .axioms import AxiomsCheckTask
from .base import Task, TaskDisabledError, TaskNameError, check, get_task, get_task_names
from .document import ProblemDocument, parse_strikes
from .representation import ReprCharacterizeTask, ReprSolveTask, ReprVerifyTask
from .skorokhod import SkorokhodFalsifyTask, SkorokhodSolveTask, SkorokhodVerifyTask
from .stopping import StopSolveTask, StopVerifyTask
from .tree import TreeGenTask

__all__ = [
    "AmputBoundaryTask",
    "AmputSweepTask",
    "AxiomsCheckTask",
    "ProblemDocument",
    "ReprCharacterizeTask",
    "ReprSolveTask",
    "ReprVerifyTask",
    "SkorokhodFalsifyTask",
    "SkorokhodSolveTask",
    "SkorokhodVerifyTask",
    "StopSolveTask",
    "StopVerifyTask",
    "Task",
    "TaskDisabledError",
    "TaskNameError",
    "TreeGenTask",
    "check",
    "get_task",
    "get_task_names",
    "parse_strikes",
]
