"""Stochastic representation under non-linear expectations on finite event trees."""

from ._version import __version__, version_info
from . import american, expectation, representation, skorokhod, stopping, tasks, tree, writers
from .american import AmericanPut, MarketSpec, build_crr, solve_boundary, strike_sweep
from .expectation import NonlinearExpectation, OperatorSpec, axiom_suite, condexp, one_step
from .representation import (
    Formulation,
    FSpec,
    RepresentationProblem,
    RepresentationSolver,
    essinf_characterization,
    residual,
    solve,
    solve_l,
)
from .skorokhod import falsify_alternative, solve_obstacle, verify_obstacle
from .stopping import brute_force_value, check_criterion, snell, solve_stopping
from .tasks import Task, get_task, get_task_names
from .tree import AdaptedProcess, StoppingRule, TreeTopology, build_binomial, build_chain

__all__ = [
    "AdaptedProcess",
    "AmericanPut",
    "FSpec",
    "Formulation",
    "MarketSpec",
    "NonlinearExpectation",
    "OperatorSpec",
    "RepresentationProblem",
    "RepresentationSolver",
    "StoppingRule",
    "Task",
    "TreeTopology",
    "__version__",
    "american",
    "axiom_suite",
    "brute_force_value",
    "build_binomial",
    "build_chain",
    "build_crr",
    "check_criterion",
    "condexp",
    "essinf_characterization",
    "expectation",
    "falsify_alternative",
    "get_task",
    "get_task_names",
    "one_step",
    "representation",
    "residual",
    "skorokhod",
    "snell",
    "solve",
    "solve_boundary",
    "solve_l",
    "solve_obstacle",
    "solve_stopping",
    "stopping",
    "strike_sweep",
    "tasks",
    "tree",
    "verify_obstacle",
    "version_info",
    "writers",
]
