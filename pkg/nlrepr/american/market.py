"""Markets of one risky asset and a bank account."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nlrepr.tree import AdaptedProcess, build_binomial
from nlrepr.tree.builders import MAX_DEPTH
from nlrepr.utils.exceptions import ParameterError


@dataclass(frozen=True)
class CRRParameters:
    N: int
    s0: float
    up: float
    down: float
    rate: float

    @property
    def q(self) -> float:
        """Risk-neutral up probability."""
        return ((1 + self.rate) - self.down) / (self.up - self.down)

    def to_dict(self) -> dict:
        return {"N": self.N, "s0": self.s0, "up": self.up, "down": self.down, "rate": self.rate}


@dataclass(frozen=True, eq=False)
class MarketSpec:
    """Prices ``P`` on a tree and a per-period rate ``r > 0``."""

    prices: AdaptedProcess
    rate: float
    crr: CRRParameters | None = None

    def __post_init__(self):
        if not self.rate > 0:
            msg = f"the interest rate must be positive, got {self.rate!r}"
            raise ParameterError(msg)
        if not (self.prices.values > 0).all():
            node = int(np.flatnonzero(self.prices.values <= 0)[0])
            label = self.tree.labels[node]
            msg = f"prices must be positive, node {label!r} has {self.prices[node]!r}"
            raise ParameterError(msg)

    @property
    def tree(self):
        return self.prices.tree

    @property
    def discount(self) -> np.ndarray:
        """``(1+r)^{-t}`` per node."""
        return (1 + self.rate) ** -self.tree.time.astype(float)

    def discount_by_time(self) -> np.ndarray:
        return (1 + self.rate) ** -np.arange(self.tree.horizon + 1, dtype=float)

    def payoff(self, k: float, positive_part: bool = False) -> np.ndarray:
        """Discounted put payoff ``(1+r)^{-t}(k - P_t)`` per node."""
        intrinsic = k - self.prices.values
        if positive_part:
            intrinsic = np.maximum(intrinsic, 0.0)
        return self.discount * intrinsic


def build_crr(N: int, s0: float, up: float, down: float, rate: float, max_depth: int = MAX_DEPTH):
    """Unfolded Cox-Ross-Rubinstein market on a binary tree.

    The first child of every node is the up move; prices are
    ``s0 * up**(t - j) * down**j`` with ``j`` down moves on the path.
    """
    if not s0 > 0 or not 0 < down < up:
        msg = f"need s0 > 0 and 0 < down < up, got s0={s0!r}, up={up!r}, down={down!r}"
        raise ParameterError(msg)
    params = CRRParameters(int(N), float(s0), float(up), float(down), float(rate))
    q = params.q
    if not 0 < q < 1:
        msg = f"no risk-neutral measure: need down < 1 + rate < up, got q={q!r}"
        raise ParameterError(msg)
    tree = build_binomial(N, p=q, sigma=1.0, dt=1.0, max_depth=max_depth)
    local = np.arange(tree.n_nodes) - tree.level_start[tree.time]
    downs = np.array([bin(int(j)).count("1") for j in local])
    prices = s0 * up ** (tree.time - downs) * down**downs
    return MarketSpec(AdaptedProcess(tree, prices), float(rate), params)


def crr_put_value(params: CRRParameters, k: float) -> float:
    """Classical recombining backward induction for the American put."""
    N, r, q = params.N, params.rate, params.q
    j = np.arange(N + 1)
    value = np.maximum(k - params.s0 * params.up ** (N - j) * params.down**j, 0.0)
    for t in range(N - 1, -1, -1):
        j = np.arange(t + 1)
        exercise = np.maximum(k - params.s0 * params.up ** (t - j) * params.down**j, 0.0)
        value = np.maximum(exercise, (q * value[:-1] + (1 - q) * value[1:]) / (1 + r))
    return float(value[0])
