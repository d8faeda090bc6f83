"""Adapted processes, terminal variables and path functionals."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nlrepr.utils.exceptions import ParameterError

from .topology import NEG_INF, TreeTopology, as_array


@dataclass(frozen=True, eq=False)
class AdaptedProcess:
    """One real value per node of ``tree``."""

    tree: TreeTopology
    values: np.ndarray

    def __post_init__(self):
        values = np.array(as_array(self.values, self.tree), dtype=float)
        if values.ndim != 1:
            msg = "an adapted process is one-dimensional"
            raise ParameterError(msg)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, tree, value):
        return cls(tree, np.full(tree.n_nodes, float(value)))

    @classmethod
    def from_mapping(cls, tree, mapping):
        return cls(tree, tree.values_from_mapping(mapping))

    def at(self, t: int) -> np.ndarray:
        """Values at the time-``t`` nodes."""
        return self.values[self.tree.level(t)]

    def terminal(self) -> TerminalVariable:
        return TerminalVariable(self.tree, self.values[self.tree.leaves])

    def __getitem__(self, node):
        return self.values[node]

    def __len__(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class TerminalVariable:
    """One real value per leaf of ``tree``."""

    tree: TreeTopology
    values: np.ndarray

    def __post_init__(self):
        values = np.array(as_array(self.values, size=self.tree.n_leaves), dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, tree, value):
        return cls(tree, np.full(tree.n_leaves, float(value)))

    def __getitem__(self, leaf):
        return self.values[leaf]

    def __len__(self):
        return self.values.size


def path_running_max(L, start: int, tree: TreeTopology | None = None) -> AdaptedProcess:
    """Running maximum of ``L`` along each path, restarted at time ``start``.

    Nodes before ``start`` carry :data:`NEG_INF`. ``-inf`` entries of ``L``
    never raise the maximum.
    """
    tree = tree if tree is not None else L.tree
    values = as_array(L, tree)
    if not 0 <= start <= tree.horizon:
        msg = f"start must lie in 0..{tree.horizon}, got {start}"
        raise ParameterError(msg)
    out = np.full(tree.n_nodes, NEG_INF)
    out[tree.level(start)] = values[tree.level(start)]
    for t in range(start + 1, tree.horizon + 1):
        level = tree.level(t)
        out[level] = np.maximum(out[tree.parent[level]], values[level])
    return AdaptedProcess(tree, out)
