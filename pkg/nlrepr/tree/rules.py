"""Stopping rules on event trees."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from traitlets.log import get_logger

from nlrepr.utils.exceptions import EnumerationGuardError, StoppingRuleError

from .processes import TerminalVariable
from .topology import TreeTopology, as_array

#: Default guards for exhaustive enumeration.
MAX_LEAVES = 2**12
MAX_RULES = 10**7


class Decision(str, enum.Enum):
    STOP = "STOP"
    CONTINUE = "CONTINUE"


@dataclass(frozen=True)
class StoppingRule:
    """An adapted stop/continue decision per node.

    The rule is stored as its minimal antichain of STOP nodes: the first STOP
    node on a path is the stopping node of that path. An ``extended`` rule may
    leave paths unstopped (``tau = +inf``).
    """

    tree: TreeTopology = field(compare=False, repr=False)
    stops: frozenset[int]
    extended: bool = False

    def __post_init__(self):
        stops = frozenset(int(s) for s in self.stops)
        object.__setattr__(self, "stops", stops)
        if any(not 0 <= s < self.tree.n_nodes for s in stops):
            msg = "stop nodes must be node indices of the tree"
            raise StoppingRuleError(msg)
        counts = self._hits.sum(axis=1)
        if (counts > 1).any():
            msg = "a STOP node lies below another STOP node"
            raise StoppingRuleError(msg)
        if not self.extended and (counts == 0).any():
            leaf = self.tree.level_start[self.tree.horizon] + int(np.flatnonzero(counts == 0)[0])
            msg = f"path to leaf {self.tree.labels[leaf]!r} never stops"
            raise StoppingRuleError(msg)

    @classmethod
    def constant(cls, tree, t: int) -> StoppingRule:
        """Stop at time ``t`` on every path."""
        return cls(tree, frozenset(tree.nodes_at(t).tolist()))

    @classmethod
    def never(cls, tree) -> StoppingRule:
        return cls(tree, frozenset(), extended=True)

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.tree.n_nodes, dtype=bool)
        mask[list(self.stops)] = True
        return mask

    @cached_property
    def _hits(self) -> np.ndarray:
        return self.mask[self.tree.ancestors]

    @cached_property
    def stop_nodes(self) -> np.ndarray:
        """Stopping node per leaf, ``-1`` where the path never stops."""
        hits = self._hits
        column = hits.argmax(axis=1)
        nodes = self.tree.ancestors[np.arange(hits.shape[0]), column]
        return np.where(hits.any(axis=1), nodes, -1)

    @cached_property
    def leaf_times(self) -> np.ndarray:
        """Stopping time per leaf, ``inf`` where the path never stops."""
        nodes = self.stop_nodes
        return np.where(nodes >= 0, self.tree.time[nodes], math.inf)

    def decision(self, node: int) -> Decision:
        return Decision.STOP if node in self.stops else Decision.CONTINUE

    def capped(self) -> StoppingRule:
        """``tau ∧ N``: unstopped paths stop at their leaf."""
        if not self.extended:
            return self
        leaves = self.tree.level_start[self.tree.horizon] + np.flatnonzero(self.stop_nodes < 0)
        return StoppingRule(self.tree, self.stops | frozenset(leaves.tolist()))

    def describe(self) -> str:
        """Per-leaf stopping times joined by ``;`` (``inf`` for never)."""
        return ";".join("inf" if math.isinf(t) else str(int(t)) for t in self.leaf_times)

    def stop_labels(self) -> list[str]:
        return sorted(self.tree.labels[s] for s in self.stops)


def first_hitting(L, level: float, strict: bool = False, cap_at_N: bool = True, tree=None):
    """First time along each path that ``L >= level`` (``L > level`` when strict).

    When ``cap_at_N`` the rule stops at the horizon on paths that never hit;
    otherwise it is an extended rule with ``+inf`` there.
    """
    tree = tree if tree is not None else L.tree
    values = as_array(L, tree)
    hit = values > level if strict else values >= level
    seen = np.zeros(tree.n_nodes, dtype=bool)
    for t in range(1, tree.horizon + 1):
        level_t = tree.level(t)
        parents = tree.parent[level_t]
        seen[level_t] = seen[parents] | hit[parents]
    first = hit & ~seen
    if cap_at_N:
        leaves = tree.leaves
        first[leaves] |= ~seen[leaves]
    return StoppingRule(tree, frozenset(np.flatnonzero(first).tolist()), extended=not cap_at_N)


def stopped_terminal(X, tau: StoppingRule, discount=None, default_value=None):
    """Per leaf, the (optionally discounted) value of ``X`` at the stopping node."""
    tree = tau.tree
    values = as_array(X, tree)
    if default_value is not None and not tau.extended:
        msg = "a default value only applies to extended rules"
        raise StoppingRuleError(msg)
    nodes = tau.stop_nodes
    never = nodes < 0
    if never.any() and default_value is None:
        msg = "rule leaves paths unstopped; a default value is required"
        raise StoppingRuleError(msg)
    safe = np.where(never, 0, nodes)
    out = values[safe]
    if discount is not None:
        factors = np.asarray(discount, dtype=float)
        out = out * factors[tree.time[safe]]
    out = np.where(never, 0.0 if default_value is None else float(default_value), out)
    return TerminalVariable(tree, out)


def _guard(tree, top, extended, allowed, max_leaves, max_rules):
    """Count the rules below ``top`` without generating them."""
    leaves = int(tree.leaf_hi[top] - tree.leaf_lo[top])
    if leaves > max_leaves:
        msg = f"subtree has {leaves} leaves, above the enumeration guard {max_leaves}"
        raise EnumerationGuardError(msg)
    counts = {}
    for t in range(tree.horizon, int(tree.time[top]) - 1, -1):
        for node in tree.descendants_at(top, t).tolist():
            if t == tree.horizon:
                count = float(allowed[node]) + float(extended)
            else:
                count = float(allowed[node]) + math.prod(counts.pop(c) for c in tree.children(node))
            counts[node] = count
    total = counts[top]
    if total > max_rules:
        msg = f"{total:.3g} stopping rules exceed the enumeration guard {max_rules}"
        raise EnumerationGuardError(msg)
    return int(total)


def enumerate_stop_sets(
    tree, top=0, allowed=None, extended=False, max_leaves=MAX_LEAVES, max_rules=MAX_RULES
):
    """Every STOP antichain of the subtree rooted at ``top``.

    ``allowed`` masks the nodes at which STOP may be chosen. Sets are
    generated in a fixed order: stopping at a node precedes the products of
    its children's choices.
    """
    if allowed is None:
        allowed = np.ones(tree.n_nodes, dtype=bool)
    total = _guard(tree, top, extended, allowed, max_leaves, max_rules)
    get_logger().debug("Enumerating %i stopping rules below node %s", total, tree.labels[top])
    sets = {}
    for t in range(tree.horizon, int(tree.time[top]) - 1, -1):
        for node in tree.descendants_at(top, t).tolist():
            options = [frozenset((node,))] if allowed[node] else []
            if t == tree.horizon:
                if extended:
                    options.append(frozenset())
            else:
                choices = [sets.pop(c) for c in tree.children(node).tolist()]
                options.extend(frozenset().union(*combo) for combo in itertools.product(*choices))
            sets[node] = options
    return sets[top]


def enumerate_rules(
    tree: TreeTopology,
    after: StoppingRule | None = None,
    extended: bool = False,
    max_leaves: int = MAX_LEAVES,
    max_rules: int = MAX_RULES,
) -> list[StoppingRule]:
    """All stopping rules of the tree, optionally only those with ``tau > sigma``.

    With ``after`` a STOP at node ``n`` is allowed only when ``sigma`` stopped
    strictly before ``n`` on its path, or when ``n`` is a leaf (``tau = N`` on
    ``{sigma = N}``).
    """
    allowed = np.ones(tree.n_nodes, dtype=bool)
    if after is not None:
        if after.extended:
            msg = "sigma must be a finite stopping rule"
            raise StoppingRuleError(msg)
        above = np.zeros(tree.n_nodes, dtype=bool)
        for t in range(1, tree.horizon + 1):
            level = tree.level(t)
            parents = tree.parent[level]
            above[level] = above[parents] | after.mask[parents]
        allowed = above | (tree.time == tree.horizon)
    sets = enumerate_stop_sets(tree, 0, allowed, extended, max_leaves, max_rules)
    return [StoppingRule(tree, s, extended=extended) for s in sets]
