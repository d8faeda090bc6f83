"""Finite non-recombining event trees."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence

import numpy as np

from nlrepr.utils.exceptions import ParameterError, TreeStructureError

#: Sentinel for running maxima before their anchor and for undefined levels.
NEG_INF = -math.inf

#: Tolerance on probability sums and increment centering.
PROB_TOL = 1e-12


def _readonly(array):
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


class TreeTopology:
    """A finite filtered probability space as a rooted tree.

    Nodes are stored in breadth-first order: the time-``t`` nodes form the
    contiguous block ``level(t)``, the children of a node are contiguous, and
    the descendants of a node at any later time are contiguous as well.
    Instances are immutable after construction.

    Parameters
    ----------
    parent : sequence of int
        Parent index per node, ``-1`` for the root (index 0).
    prob : sequence of float
        Transition probability of the edge into each node; the root entry is
        ignored.
    increment : array of shape (n_nodes,) or (n_nodes, d)
        Martingale increment of the edge into each node.
    dt : float or sequence of float
        Step sizes, one per time step.
    labels : sequence of str, optional
        External node ids; defaults to the node index.
    """

    def __init__(self, parent, prob, increment, dt, labels=None):
        parent = np.asarray(parent, dtype=np.intp)
        n = parent.size
        if n < 2 or parent[0] != -1:
            msg = "a tree needs a root at index 0 and at least one step"
            raise TreeStructureError(msg)
        if (parent[1:] < 0).any():
            msg = "exactly one root is allowed"
            raise TreeStructureError(msg)
        if (parent[1:] >= np.arange(1, n)).any() or (np.diff(parent[1:]) < 0).any():
            msg = "nodes must be listed in breadth-first order"
            raise TreeStructureError(msg)

        time = np.zeros(n, dtype=np.intp)
        for _ in range(n):
            updated = np.concatenate(([0], time[parent[1:]] + 1))
            if np.array_equal(updated, time):
                break
            time = updated
        if (np.diff(time) < 0).any():
            msg = "nodes must be listed in breadth-first order"
            raise TreeStructureError(msg)

        horizon = int(time[-1])
        n_children = np.bincount(parent[1:], minlength=n)
        if (n_children[time < horizon] == 0).any():
            node = int(np.flatnonzero((n_children == 0) & (time < horizon))[0])
            msg = f"leaf {node} sits at time {time[node]} before the horizon {horizon}"
            raise TreeStructureError(msg)

        dt = np.broadcast_to(np.asarray(dt, dtype=float), (horizon,)).copy()
        if not (dt > 0).all():
            msg = f"step sizes must be positive, got {dt.tolist()}"
            raise ParameterError(msg)

        prob = np.array(prob, dtype=float)
        prob[0] = 1.0
        if not ((prob[1:] > 0) & (prob[1:] <= 1 + PROB_TOL)).all():
            msg = "edge probabilities must lie in (0, 1]"
            raise TreeStructureError(msg)
        sums = np.bincount(parent[1:], weights=prob[1:], minlength=n)
        bad = np.flatnonzero((n_children > 0) & (np.abs(sums - 1.0) > PROB_TOL))
        if bad.size:
            msg = f"probabilities at node {int(bad[0])} sum to {sums[bad[0]]!r}"
            raise TreeStructureError(msg)
        prob[1:] = prob[1:] / sums[parent[1:]]

        increment = np.array(increment, dtype=float)
        if increment.ndim == 1:
            increment = increment[:, None]
        if increment.shape[0] != n:
            msg = "one increment per node is required"
            raise TreeStructureError(msg)
        increment[0] = 0.0
        for j in range(increment.shape[1]):
            drift = np.bincount(parent[1:], weights=prob[1:] * increment[1:, j], minlength=n)
            bad = np.flatnonzero(np.abs(drift) > PROB_TOL)
            if bad.size:
                msg = f"increments at node {int(bad[0])} are not centered (drift {drift[bad[0]]!r})"
                raise TreeStructureError(msg)

        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(label) for label in labels)
        if len(labels) != n or len(set(labels)) != n:
            msg = "node labels must be unique, one per node"
            raise TreeStructureError(msg)

        self.horizon = horizon
        self.parent = _readonly(parent)
        self.time = _readonly(time)
        self.prob = _readonly(prob)
        self.increment = _readonly(increment)
        self.dt = _readonly(dt)
        self.labels = labels
        self._index = {label: i for i, label in enumerate(labels)}
        self.n_children = _readonly(n_children)
        self.child_start = _readonly(np.searchsorted(parent[1:], np.arange(n)) + 1)
        self.level_start = _readonly(np.searchsorted(time, np.arange(horizon + 2)))

        anc = np.empty((self.n_leaves, horizon + 1), dtype=np.intp)
        anc[:, horizon] = np.arange(self.level_start[horizon], n)
        for t in range(horizon - 1, -1, -1):
            anc[:, t] = parent[anc[:, t + 1]]
        self.ancestors = _readonly(anc)

        lo = np.empty(n, dtype=np.intp)
        hi = np.empty(n, dtype=np.intp)
        for t in range(horizon + 1):
            nodes = self.nodes_at(t)
            lo[nodes] = np.searchsorted(anc[:, t], nodes, side="left")
            hi[nodes] = np.searchsorted(anc[:, t], nodes, side="right")
        self.leaf_lo = _readonly(lo)
        self.leaf_hi = _readonly(hi)

        self._build_levels()

    def _build_levels(self):
        """Padded per-level child tables and z-extraction weights."""
        kids, kid_prob, weights = [], [], []
        for t in range(self.horizon):
            nodes = self.nodes_at(t)
            counts = self.n_children[nodes]
            width = int(counts.max())
            offsets = np.arange(width)
            valid = offsets[None, :] < counts[:, None]
            first = self.child_start[nodes] - self.level_start[t + 1]
            local = np.where(valid, first[:, None] + offsets[None, :], 0)
            global_ = local + self.level_start[t + 1]
            p = np.where(valid, self.prob[global_], 0.0)
            e = np.where(valid[..., None], self.increment[global_], 0.0)
            pe = p[..., None] * e
            moment = np.einsum("nbi,nbj->nij", pe, e)
            w = np.einsum("nij,nbj->nib", np.linalg.pinv(moment), pe)
            kids.append(_readonly(local))
            kid_prob.append(_readonly(p))
            weights.append(_readonly(w))
        self.kids = tuple(kids)
        self.kid_prob = tuple(kid_prob)
        self.weights = tuple(weights)

    # ------------------------------------------------------------------
    # Shape helpers
    # ------------------------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return int(self.parent.size)

    @property
    def n_leaves(self) -> int:
        return int(self.n_nodes - self.level_start[self.horizon])

    @property
    def dim(self) -> int:
        """Dimension d of the driving noise."""
        return int(self.increment.shape[1])

    def level(self, t: int) -> slice:
        """Slice of the time-``t`` nodes."""
        return slice(int(self.level_start[t]), int(self.level_start[t + 1]))

    def nodes_at(self, t: int) -> np.ndarray:
        return np.arange(self.level_start[t], self.level_start[t + 1])

    def width(self, t: int) -> int:
        return int(self.level_start[t + 1] - self.level_start[t])

    @property
    def leaves(self) -> slice:
        return self.level(self.horizon)

    def is_leaf(self, node: int) -> bool:
        return bool(self.time[node] == self.horizon)

    def children(self, node: int) -> np.ndarray:
        start = self.child_start[node]
        return np.arange(start, start + self.n_children[node])

    def descendants_at(self, node: int, t: int) -> np.ndarray:
        """Descendants of ``node`` at time ``t`` (``node`` itself at its own time)."""
        column = self.ancestors[self.leaf_lo[node] : self.leaf_hi[node], t]
        return np.unique(column)

    def lift(self, values_t, t: int) -> np.ndarray:
        """Broadcast per-node values at time ``t`` onto the leaves below them."""
        values_t = np.asarray(values_t)
        local = self.ancestors[:, t] - self.level_start[t]
        return values_t[..., local]

    # ------------------------------------------------------------------
    # Labels
    # ------------------------------------------------------------------

    def index_of(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            msg = f"unknown node id {label!r}"
            raise ParameterError(msg) from None

    def values_from_mapping(self, mapping: Mapping) -> np.ndarray:
        """Per-node array from a ``{node id: value}`` mapping covering every node."""
        values = np.full(self.n_nodes, np.nan)
        for label, value in mapping.items():
            values[self.index_of(label)] = float(value)
        missing = np.flatnonzero(np.isnan(values))
        if missing.size:
            msg = f"no value for node {self.labels[missing[0]]!r}"
            raise ParameterError(msg)
        return values

    def to_document(self) -> dict:
        """Explicit tree document that :func:`build_explicit` reads back."""
        nodes = []
        for i in range(self.n_nodes):
            parent = int(self.parent[i])
            nodes.append(
                {
                    "id": self.labels[i],
                    "parent": self.labels[parent] if parent >= 0 else None,
                    "prob": float(self.prob[i]),
                    "increment": [float(x) for x in self.increment[i]],
                }
            )
        return {"kind": "explicit", "dt": [float(x) for x in self.dt], "nodes": nodes}

    def __repr__(self):
        return f"<TreeTopology horizon={self.horizon} nodes={self.n_nodes} leaves={self.n_leaves}>"


def as_array(values, tree: TreeTopology | None = None, size: int | None = None) -> np.ndarray:
    """Unwrap a process (or plain sequence) into a float array, checking its length."""
    array = np.asarray(getattr(values, "values", values), dtype=float)
    expected = size if size is not None else (tree.n_nodes if tree is not None else None)
    if expected is not None and array.shape[-1] != expected:
        msg = f"expected {expected} values, got {array.shape[-1]}"
        raise ParameterError(msg)
    return array


def labels_of(tree: TreeTopology, nodes: Sequence[int]) -> list[str]:
    return [tree.labels[int(n)] for n in nodes]
