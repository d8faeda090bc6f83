"""Tree generators."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import math
from collections import deque

import numpy as np

from nlrepr.utils.exceptions import ParameterError, TreeStructureError

from .topology import TreeTopology

#: Largest horizon accepted for binary trees.
MAX_DEPTH = 20


def _check_horizon(N, max_depth):
    if isinstance(N, bool) or int(N) != N or N < 1:
        msg = f"horizon must be a positive integer, got {N!r}"
        raise ParameterError(msg)
    if N > max_depth:
        msg = f"horizon {N} exceeds the depth guard {max_depth}"
        raise ParameterError(msg)


def binomial_increments(p: float, sigma: float, dt: float) -> tuple[float, float]:
    """Centered up/down increments with variance ``sigma**2 * dt``."""
    up = sigma * math.sqrt(dt * (1 - p) / p)
    down = -sigma * math.sqrt(dt * p / (1 - p))
    return up, down


def build_binomial(
    N: int, p: float = 0.5, sigma: float = 1.0, dt: float = 1.0, max_depth: int = MAX_DEPTH
) -> TreeTopology:
    """Non-recombining binary tree; the up move is the first child of every node."""
    _check_horizon(N, max_depth)
    if not 0 < p < 1:
        msg = f"up-probability must lie in (0, 1), got {p!r}"
        raise ParameterError(msg)
    if not sigma > 0 or not dt > 0:
        msg = f"sigma and dt must be positive, got sigma={sigma!r}, dt={dt!r}"
        raise ParameterError(msg)
    n = 2 ** (N + 1) - 1
    index = np.arange(n)
    parent = (index - 1) // 2
    parent[0] = -1
    is_up = index % 2 == 1
    up, down = binomial_increments(p, sigma, dt)
    prob = np.where(is_up, p, 1 - p)
    increment = np.where(is_up, up, down)
    return TreeTopology(parent, prob, increment, dt)


def build_chain(N: int, dt: float = 1.0) -> TreeTopology:
    """Deterministic single-path tree."""
    _check_horizon(N, math.inf)
    n = N + 1
    parent = np.arange(-1, n - 1)
    return TreeTopology(parent, np.ones(n), np.zeros(n), dt)


def build_explicit(nodes, dt) -> TreeTopology:
    """Tree from explicit node records in any order.

    Each record carries ``id``, ``parent`` (``None`` for the root), ``prob``
    and ``increment`` (scalar or vector). Nodes are re-indexed breadth first;
    children keep their listed order.
    """
    records = {}
    children: dict[str, list[str]] = {}
    roots = []
    for record in nodes:
        label = str(record["id"])
        if label in records:
            msg = f"duplicate node id {label!r}"
            raise TreeStructureError(msg)
        records[label] = record
        parent = record.get("parent")
        if parent is None:
            roots.append(label)
        else:
            children.setdefault(str(parent), []).append(label)
    if len(roots) != 1:
        msg = f"exactly one root is required, found {len(roots)}"
        raise TreeStructureError(msg)
    unknown = set(children) - set(records)
    if unknown:
        msg = f"unknown parent id {sorted(unknown)[0]!r}"
        raise TreeStructureError(msg)

    order = []
    position = {}
    queue = deque(roots)
    while queue:
        label = queue.popleft()
        position[label] = len(order)
        order.append(label)
        queue.extend(children.get(label, []))
    if len(order) != len(records):
        msg = "some nodes are not reachable from the root"
        raise TreeStructureError(msg)

    parent = [-1] + [position[str(records[label]["parent"])] for label in order[1:]]
    prob = [1.0] + [float(records[label]["prob"]) for label in order[1:]]
    increment = [np.atleast_1d(np.asarray(records[label].get("increment", 0.0), dtype=float))
                 for label in order]
    dim = max(v.size for v in increment)
    increment = [np.broadcast_to(v, (dim,)) if v.size == 1 else v for v in increment]
    return TreeTopology(parent, prob, np.stack(increment), dt, labels=order)
