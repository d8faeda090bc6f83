"""Optimal stopping by level crossing of the representing process."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd
from traitlets import Float, Integer

from nlrepr.expectation import NonlinearExpectation
from nlrepr.representation import (
    Formulation,
    FSpec,
    RepresentationProblem,
    RepresentationResult,
    RepresentationSolver,
)
from nlrepr.tree import AdaptedProcess, StoppingRule, enumerate_stop_sets, first_hitting
from nlrepr.tree.topology import as_array
from nlrepr.utils.base import NlreprBase
from nlrepr.utils.exceptions import StoppingRuleError


@dataclass
class StoppingSolution:
    L: AdaptedProcess
    tau_lower: StoppingRule
    tau_upper: StoppingRule
    value: float
    value_lower: float
    representation: RepresentationResult | None = None


@dataclass
class CriterionCheck:
    """Per-path verdict of the level-crossing criterion for one rule."""

    per_path: np.ndarray
    sandwich: np.ndarray
    running_max: np.ndarray

    @property
    def passed(self) -> bool:
        return bool(self.per_path.all())

    def failing_paths(self, tree) -> list[str]:
        leaves = tree.level_start[tree.horizon] + np.flatnonzero(~self.per_path)
        return [tree.labels[n] for n in leaves]


@dataclass
class BruteForceResult:
    value: float
    argmax: list[StoppingRule]
    n_rules: int


def snell(op: NonlinearExpectation, X):
    """Envelope ``U_t = max(X_t, E_t[U_{t+1}])`` and its earliest optimal rule."""
    op.require(tower=True)
    tree = op.tree
    X = as_array(X, tree)
    U = X.copy()
    for t in range(tree.horizon - 1, -1, -1):
        level = tree.level(t)
        U[level] = np.maximum(X[level], op.step(t, U[tree.level(t + 1)]))
    U = AdaptedProcess(tree, U)
    tau = first_hitting(X - U.values, 0.0, strict=False, cap_at_N=True, tree=tree)
    return U, tau


def check_criterion(L, tau: StoppingRule) -> CriterionCheck:
    """Level-crossing criterion per path.

    ``tau`` passes on a path when it lies between the first times ``L >= 0``
    and ``L > 0`` (both capped at ``N``) and, unless it stops at ``N``, the
    running maximum of ``L`` up to ``tau`` is attained at ``tau``.
    """
    tree = tau.tree
    if tau.extended:
        msg = "the criterion is defined for finite rules"
        raise StoppingRuleError(msg)
    values = as_array(L, tree)
    N = tree.horizon
    lower = first_hitting(values, 0.0, strict=False, tree=tree).leaf_times
    upper = first_hitting(values, 0.0, strict=True, tree=tree).leaf_times
    times = tau.leaf_times
    sandwich = (lower <= times) & (times <= upper)

    anc = tree.ancestors
    path = values[anc]
    stop = times.astype(int)
    before = np.arange(N + 1)[None, :] <= stop[:, None]
    peak = np.where(before, path, -np.inf).max(axis=1)
    at_stop = path[np.arange(tree.n_leaves), stop]
    running_max = (stop == N) | (peak == at_stop)
    return CriterionCheck(sandwich & running_max, sandwich, running_max)


class StoppingSolver(NlreprBase):
    """Level-crossing stopping with Snell and enumeration oracles."""

    batch_size = Integer(
        2**14, help="Stopping rules evaluated per batch by the enumeration oracle."
    ).tag(config=True)
    tie_tol = Float(1e-12, help="Values this close to the best one count as ties.").tag(config=True)

    def representation_solver(self) -> RepresentationSolver:
        return RepresentationSolver(parent=self)

    def solve(self, op: NonlinearExpectation, X) -> StoppingSolution:
        """Optimal value and the first weak and strict crossings of level 0."""
        op.require(tower=True)
        tree = op.tree
        X = X if isinstance(X, AdaptedProcess) else AdaptedProcess(tree, X)
        problem = RepresentationProblem(X, FSpec.identity(), op, Formulation.TERMINAL)
        result = self.representation_solver().solve(problem)
        L = result.L
        tau_lower = first_hitting(L, 0.0, strict=False)
        tau_upper = first_hitting(L, 0.0, strict=True)
        value = float(op.evaluate_stopped(X, tau_upper.mask)[0])
        value_lower = float(op.evaluate_stopped(X, tau_lower.mask)[0])
        self.log.info("Stopping value %.12g (residual %.3g)", value, result.residual)
        return StoppingSolution(L, tau_lower, tau_upper, value, value_lower, result)

    def all_rules(self, tree) -> list[frozenset]:
        return enumerate_stop_sets(
            tree, 0, max_leaves=self.max_leaves, max_rules=self.max_rules
        )

    def rule_values(self, op: NonlinearExpectation, X, sets) -> np.ndarray:
        """``E_0[X_tau]`` for each STOP set, evaluated in batches."""
        tree = op.tree
        X = as_array(X, tree)
        batches = [sets[i : i + self.batch_size] for i in range(0, len(sets), self.batch_size)]

        def evaluate(batch):
            masks = np.zeros((len(batch), tree.n_nodes), dtype=bool)
            for row, stops in enumerate(batch):
                masks[row, list(stops)] = True
            return op.evaluate_stopped(X, masks)[:, 0]

        if self.threads > 1 and len(batches) > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                parts = list(pool.map(evaluate, batches))
        else:
            parts = [evaluate(b) for b in batches]
        return np.concatenate(parts) if parts else np.zeros(0)

    def brute_force_value(self, op: NonlinearExpectation, X) -> BruteForceResult:
        """Best ``E_0[X_tau]`` over every stopping rule, keeping ties."""
        op.require(tower=True)
        tree = op.tree
        sets = self.all_rules(tree)
        values = self.rule_values(op, X, sets)
        best = float(values.max())
        winners = np.flatnonzero(values >= best - self.tie_tol)
        self.log.debug("Enumerated %i rules, %i optimal", len(sets), winners.size)
        return BruteForceResult(best, [StoppingRule(tree, sets[i]) for i in winners], len(sets))

    def criterion_table(
        self, op: NonlinearExpectation, X, solution: StoppingSolution
    ) -> pd.DataFrame:
        """Every rule with its value, criterion verdict and optimality."""
        tree = op.tree
        sets = self.all_rules(tree)
        values = self.rule_values(op, X, sets)
        rows = []
        for stops, value in zip(sets, values):
            rule = StoppingRule(tree, stops)
            rows.append(
                {
                    "rule": rule.describe(),
                    "stops": " ".join(rule.stop_labels()),
                    "value": float(value),
                    "criterion": check_criterion(solution.L, rule).passed,
                    "optimal": bool(abs(value - solution.value) <= self.tol_check),
                }
            )
        return pd.DataFrame(rows, columns=["rule", "stops", "value", "criterion", "optimal"])


def solve_stopping(op: NonlinearExpectation, X, **kw) -> StoppingSolution:
    return StoppingSolver(**kw).solve(op, X)


def brute_force_value(op: NonlinearExpectation, X, **kw) -> BruteForceResult:
    return StoppingSolver(**kw).brute_force_value(op, X)


def criterion_table(op, X, solution: StoppingSolution, **kw) -> pd.DataFrame:
    return StoppingSolver(**kw).criterion_table(op, X, solution)
