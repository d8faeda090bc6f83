from .builders import MAX_DEPTH, binomial_increments, build_binomial, build_chain, build_explicit
from .processes import AdaptedProcess, TerminalVariable, path_running_max
from .rules import (
    Decision,
    StoppingRule,
    enumerate_rules,
    enumerate_stop_sets,
    first_hitting,
    stopped_terminal,
)
from .topology import NEG_INF, TreeTopology, as_array

__all__ = [
    "MAX_DEPTH",
    "NEG_INF",
    "AdaptedProcess",
    "Decision",
    "StoppingRule",
    "TerminalVariable",
    "TreeTopology",
    "as_array",
    "binomial_increments",
    "build_binomial",
    "build_chain",
    "build_explicit",
    "enumerate_rules",
    "enumerate_stop_sets",
    "first_hitting",
    "path_running_max",
    "stopped_terminal",
]
