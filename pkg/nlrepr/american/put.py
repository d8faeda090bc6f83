"""A strike-independent exercise signal for American puts."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd
from traitlets import Bool, Integer

from nlrepr.expectation import NonlinearExpectation
from nlrepr.representation import (
    Direction,
    Formulation,
    FSpec,
    RepresentationProblem,
    RepresentationSolver,
)
from nlrepr.stopping import CriterionCheck, snell
from nlrepr.tree import AdaptedProcess, StoppingRule, enumerate_stop_sets, first_hitting
from nlrepr.tree.topology import as_array
from nlrepr.utils.base import NlreprBase
from nlrepr.utils.exceptions import ParameterError

from .market import MarketSpec, crr_put_value

#: Columns of the per-strike table, in order.
SWEEP_COLUMNS = [
    "k",
    "tau_lower",
    "tau_upper",
    "value",
    "value_raw",
    "value_lower",
    "snell",
    "gap",
    "criterion_lower",
    "criterion_upper",
    "signal_below_strike",
    "dominance",
    "classical",
]


class PayoffMode(str, enum.Enum):
    RAW = "RAW"
    POSITIVE_PART = "POSITIVE_PART"


def boundary_fspec(market: MarketSpec) -> FSpec:
    """``f(u, l) = r/(1+r) (1+r)^{-u} l`` before the horizon and ``(1+r)^{-N} l`` at it."""
    N, r = market.tree.horizon, market.rate
    scale = r / (1 + r) * market.discount_by_time()
    scale[N] = (1 + r) ** -N
    return FSpec.scaled(scale, Direction.INCREASING)


def boundary_problem(op: NonlinearExpectation, market: MarketSpec) -> RepresentationProblem:
    """The representation of ``-(1+r)^{-t} P_t`` whose solution is ``-K``."""
    target = AdaptedProcess(market.tree, -market.discount * market.prices.values)
    return RepresentationProblem(target, boundary_fspec(market), op, Formulation.PLAIN)


def exercise_times(K, k: float, tree=None) -> tuple[StoppingRule, StoppingRule]:
    """First times with ``K <= k`` and ``K < k``; ``+inf`` where never."""
    if k < 0:
        msg = f"strikes must be nonnegative, got {k!r}"
        raise ParameterError(msg)
    tree = tree if tree is not None else K.tree
    minus = -as_array(K, tree)
    lower = first_hitting(minus, -k, strict=False, cap_at_N=False, tree=tree)
    upper = first_hitting(minus, -k, strict=True, cap_at_N=False, tree=tree)
    return lower, upper


def check_exercise_criterion(K, k: float, tau: StoppingRule) -> CriterionCheck:
    """Per path: ``tau`` between the two exercise times and, if finite,
    at a running minimum of K."""
    tree = tau.tree
    values = as_array(K, tree)
    lower, upper = exercise_times(values, k, tree)
    times = tau.leaf_times
    sandwich = (lower.leaf_times <= times) & (times <= upper.leaf_times)
    finite = np.isfinite(times)
    stop = np.where(finite, times, tree.horizon).astype(int)
    path = values[tree.ancestors]
    before = np.arange(tree.horizon + 1)[None, :] <= stop[:, None]
    low = np.where(before, path, np.inf).min(axis=1)
    at_stop = path[np.arange(tree.n_leaves), stop]
    running_min = ~finite | (low == at_stop)
    return CriterionCheck(sandwich & running_min, sandwich, running_min)


class AmericanPut(NlreprBase):
    """Solve the exercise signal once and price puts for any strike with it."""

    enumerate_candidates = Bool(
        False, help="Also enumerate every extended rule meeting the exercise criterion."
    ).tag(config=True)

    grid_size = Integer(20, help="Strikes in the default grid.").tag(config=True)

    def solve_boundary(self, op: NonlinearExpectation, market: MarketSpec) -> AdaptedProcess:
        op.require(tower=True)
        problem = boundary_problem(op, market)
        result = RepresentationSolver(parent=self).solve(problem)
        self.log.info("Exercise signal solved (residual %.3g)", result.residual)
        return AdaptedProcess(market.tree, -result.L.values)

    def boundary_residual(self, op: NonlinearExpectation, market: MarketSpec, K) -> float:
        problem = boundary_problem(op, market)
        minus = -as_array(K, market.tree)
        return RepresentationSolver(parent=self).residual(problem, minus)

    def put_value(
        self,
        op: NonlinearExpectation,
        market: MarketSpec,
        k: float,
        tau: StoppingRule,
        mode: PayoffMode = PayoffMode.RAW,
    ) -> float:
        """``E_0`` of the discounted put payoff at ``tau``.

        RAW pays ``(1+r)^{-tau}(k - P_tau)`` on ``{tau <= N}`` and 0 otherwise;
        POSITIVE_PART pays the positive part at ``tau ∧ N``.
        """
        mode = PayoffMode(mode)
        if mode is PayoffMode.POSITIVE_PART:
            payoff = market.payoff(k, positive_part=True)
            mask = tau.capped().mask
        else:
            payoff = market.payoff(k)
            mask = tau.mask
        return float(op.evaluate_stopped(payoff, mask, never_value=0.0)[0])

    def put_snell_value(self, op: NonlinearExpectation, market: MarketSpec, k: float) -> float:
        U, _ = snell(op, market.payoff(k, positive_part=True))
        return float(U[0])

    def candidate_rules(self, market: MarketSpec, K, k: float) -> list[StoppingRule]:
        """Every extended rule meeting the exercise criterion for strike ``k``."""
        tree = market.tree
        sets = enumerate_stop_sets(
            tree, 0, extended=True, max_leaves=self.max_leaves, max_rules=self.max_rules
        )
        rules = (StoppingRule(tree, s, extended=True) for s in sets)
        return [rule for rule in rules if check_exercise_criterion(K, k, rule).passed]

    def _strike_row(self, op, market, K, k, tol) -> dict:
        values = as_array(K, market.tree)
        lower, upper = exercise_times(values, k, market.tree)
        value = self.put_value(op, market, k, upper, PayoffMode.POSITIVE_PART)
        snell_value = self.put_snell_value(op, market, k)
        stops = np.fromiter(upper.stops, dtype=int)
        row = {
            "k": float(k),
            "tau_lower": lower.describe(),
            "tau_upper": upper.describe(),
            "value": value,
            "value_raw": self.put_value(op, market, k, upper, PayoffMode.RAW),
            "value_lower": self.put_value(op, market, k, lower, PayoffMode.POSITIVE_PART),
            "snell": snell_value,
            "gap": abs(value - snell_value),
            "criterion_lower": check_exercise_criterion(values, k, lower).passed,
            "criterion_upper": check_exercise_criterion(values, k, upper).passed,
            "signal_below_strike": bool((values[stops] <= k + tol).all()),
            "classical": math.nan if market.crr is None else crr_put_value(market.crr, k),
        }
        if self.enumerate_candidates:
            candidates = self.candidate_rules(market, values, k)
            gaps = [
                abs(self.put_value(op, market, k, rule, PayoffMode.POSITIVE_PART) - snell_value)
                for rule in candidates
            ]
            row["n_candidates"] = len(candidates)
            row["candidate_gap"] = max(gaps, default=0.0)
        return row

    def default_strikes(self, market: MarketSpec, K) -> np.ndarray:
        prices = market.prices.values
        top = 1.5 * as_array(K, market.tree).max()
        return np.linspace(0.5 * prices.min(), top, self.grid_size)

    def sweep(
        self, op: NonlinearExpectation, market: MarketSpec, strikes=None, K=None
    ) -> pd.DataFrame:
        """Per-strike exercise times, values and oracle comparisons from one signal."""
        op.require(tower=True)
        if K is None:
            K = solve_boundary(op, market, parent=self)
        strikes = self.default_strikes(market, K) if strikes is None else np.asarray(strikes, float)
        if strikes.size == 0:
            msg = "the strike grid is empty"
            raise ParameterError(msg)
        tol = self.tol_check
        dominance = bool((market.prices.values <= as_array(K, market.tree) + tol).all())

        def row(k):
            return self._strike_row(op, market, K, float(k), tol)

        if self.threads > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                rows = list(pool.map(row, strikes))
        else:
            rows = [row(k) for k in strikes]
        frame = pd.DataFrame(rows)
        frame["dominance"] = dominance
        extra = [c for c in frame.columns if c not in SWEEP_COLUMNS]
        self.log.info("Swept %i strikes, largest gap %.3g", len(frame), frame["gap"].max())
        return frame[SWEEP_COLUMNS + extra]


def sweep_long(frame: pd.DataFrame) -> pd.DataFrame:
    """Plot-ready long table ``k, series, value``."""
    wide = frame[["k", "value", "value_raw", "value_lower", "snell", "classical"]].rename(
        columns={"value": "put_value"}
    )
    return wide.melt(id_vars="k", var_name="series", value_name="value").dropna()


def solve_boundary(op, market: MarketSpec, **kw) -> AdaptedProcess:
    return AmericanPut(**kw).solve_boundary(op, market)


def boundary_residual(op, market: MarketSpec, K, **kw) -> float:
    return AmericanPut(**kw).boundary_residual(op, market, K)


def put_value(op, market, k, tau, mode=PayoffMode.RAW, **kw) -> float:
    return AmericanPut(**kw).put_value(op, market, k, tau, mode)


def put_snell_value(op, market, k, **kw) -> float:
    return AmericanPut(**kw).put_snell_value(op, market, k)


def strike_sweep(op, market, strikes=None, K=None, **kw) -> pd.DataFrame:
    return AmericanPut(**kw).sweep(op, market, strikes, K)
