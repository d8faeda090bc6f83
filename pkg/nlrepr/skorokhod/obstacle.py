"""Skorokhod-type obstacle problem driven by the running maximum of L."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from nlrepr.expectation import NonlinearExpectation
from nlrepr.representation import (
    Family,
    Formulation,
    FSpec,
    RepresentationProblem,
    RepresentationSolver,
)
from nlrepr.stopping import StoppingSolver
from nlrepr.tree import NEG_INF, AdaptedProcess, StoppingRule, first_hitting, path_running_max
from nlrepr.tree.topology import as_array
from nlrepr.utils.base import NlreprBase
from nlrepr.utils.exceptions import ParameterError

#: Smallest step of eta counted as an increase.
INCREASE_TOL = 1e-12

#: Largest distance from eta at which an alternative counts as eta itself.
CONSISTENT_TOL = 1e-6


class Orientation(str, enum.Enum):
    DOMINATES = "DOMINATES"
    DOMINATED = "DOMINATED"


class Verdict(str, enum.Enum):
    CONSISTENT = "CONSISTENT"
    WITNESS = "WITNESS"
    UNRESOLVED = "UNRESOLVED"


@dataclass
class ObstacleSolution:
    Y: AdaptedProcess
    eta: AdaptedProcess
    orientation: Orientation
    f: FSpec
    L: AdaptedProcess | None = None


@dataclass
class ObstacleCheck:
    name: str
    passed: bool
    max_violation: float
    node: str | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class ObstacleReport:
    checks: list[ObstacleCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name) -> ObstacleCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


@dataclass
class FalsificationResult:
    verdict: Verdict
    distance: float
    epsilon: float | None = None
    direction: str | None = None
    sigma: StoppingRule | None = None
    tau: StoppingRule | None = None
    failing: list[str] = field(default_factory=list)
    report: ObstacleReport | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "distance": self.distance,
            "epsilon": self.epsilon,
            "direction": self.direction,
            "sigma": None if self.sigma is None else self.sigma.describe(),
            "tau": None if self.tau is None else self.tau.describe(),
            "failing": list(self.failing),
            "checks": None if self.report is None else self.report.to_dict()["checks"],
        }


def orientation_of(f: FSpec) -> Orientation:
    return Orientation.DOMINATES if f.increasing else Orientation.DOMINATED


def obstacle_values(op: NonlinearExpectation, X, eta, f: FSpec | None = None) -> AdaptedProcess:
    """``Y_t = E_t[sum_{u=t}^{N-1} f(u, eta_u) + X_N]`` at every node."""
    tree = op.tree
    f = f or FSpec.identity()
    X = as_array(X, tree)
    eta = as_array(eta, tree)
    N = tree.horizon
    anc = tree.ancestors
    reward = f(np.arange(N), eta[anc[:, :N]])
    tail = np.cumsum(reward[:, ::-1], axis=1)[:, ::-1]
    terminal = X[tree.leaves]
    Y = X.copy()
    for t in range(N):
        Y[tree.level(t)] = op.condexp(t, tail[:, t] + terminal)
    return AdaptedProcess(tree, Y)


def increase_points(eta, tree=None) -> np.ndarray:
    """Nodes before the horizon at which ``eta`` strictly increases; time 0 always does."""
    tree = tree if tree is not None else eta.tree
    values = as_array(eta, tree)
    points = np.zeros(tree.n_nodes, dtype=bool)
    points[0] = True
    inner = np.flatnonzero((tree.time > 0) & (tree.time < tree.horizon))
    points[inner] = values[inner] - values[tree.parent[inner]] > INCREASE_TOL
    return points


def _check(name, tree, violation) -> ObstacleCheck:
    violation = np.asarray(violation, dtype=float)
    worst = int(np.argmax(violation)) if violation.size else 0
    value = float(violation[worst]) if violation.size else 0.0
    return ObstacleCheck(name, True, max(value, 0.0), tree.labels[worst] if value > 0 else None)


class ObstacleSolver(NlreprBase):
    """Solve, verify and probe the uniqueness of the obstacle problem."""

    def solve(self, op: NonlinearExpectation, X, f: FSpec | None = None) -> ObstacleSolution:
        op.require(tower=True)
        tree = op.tree
        f = f or FSpec.identity()
        X = X if isinstance(X, AdaptedProcess) else AdaptedProcess(tree, X)
        problem = RepresentationProblem(X, f, op, Formulation.TERMINAL)
        result = RepresentationSolver(parent=self).solve(problem)
        eta = path_running_max(result.L, 0).values.copy()
        eta[tree.leaves] = NEG_INF
        eta = AdaptedProcess(tree, eta)
        Y = obstacle_values(op, X, eta, f)
        self.log.info("Obstacle solved with %i increase points", int(increase_points(eta).sum()))
        return ObstacleSolution(Y, eta, orientation_of(f), f, result.L)

    def verify(self, op: NonlinearExpectation, solution: ObstacleSolution, X) -> ObstacleReport:
        """Domination, terminal match, flat-off and the defining expectation."""
        tree = op.tree
        tol = self.tol_check
        X = as_array(X, tree)
        Y = solution.Y.values
        eta = solution.eta.values
        before = tree.time < tree.horizon
        sign = 1.0 if solution.orientation is Orientation.DOMINATES else -1.0
        points = increase_points(eta, tree)

        checks = [
            _check("domination", tree, np.where(before, sign * (X - Y), 0.0)),
            _check("terminal", tree, np.where(before, 0.0, np.abs(Y - X))),
            _check("flat_off", tree, np.where(points, np.abs(Y - X), 0.0)),
            _check(
                "eta_nondecreasing",
                tree,
                np.where(
                    (tree.time > 0) & before, eta[np.maximum(tree.parent, 0)] - eta, 0.0
                ),
            ),
            _check(
                "representation",
                tree,
                np.abs(Y - obstacle_values(op, X, eta, solution.f).values),
            ),
        ]
        if solution.L is not None:
            running = path_running_max(solution.L, 0).values
            checks.append(
                _check("eta_running_max", tree, np.where(before, np.abs(eta - running), 0.0))
            )
        for check in checks:
            check.passed = check.max_violation <= tol
        return ObstacleReport(checks)

    def _witness_rules(self, tree, high, low, epsilon):
        """``sigma = first high > low + eps``, ``tau = first t >= sigma with low >= high``."""
        N = tree.horizon
        before = tree.time < N
        gap = np.subtract(high, low, out=np.full(tree.n_nodes, NEG_INF), where=before)
        sigma = first_hitting(gap, epsilon, strict=True, tree=tree)
        anc = tree.ancestors
        start = sigma.leaf_times.astype(int)
        times = np.arange(N + 1)[None, :]
        caught = (low[anc] >= high[anc]) & (times >= start[:, None]) & (times < N)
        stop = np.where(caught.any(axis=1), caught.argmax(axis=1), N)
        tau = StoppingRule(tree, frozenset(anc[np.arange(tree.n_leaves), stop].tolist()))
        return sigma, tau

    def falsify(
        self,
        op: NonlinearExpectation,
        X,
        zeta,
        solution: ObstacleSolution | None = None,
        f: FSpec | None = None,
    ) -> FalsificationResult:
        """Show that a nondecreasing ``zeta`` other than ``eta`` breaks the obstacle system."""
        tree = op.tree
        solution = solution or self.solve(op, X, f)
        f = solution.f
        X = as_array(X, tree)
        zeta = as_array(zeta, tree).copy()
        before = tree.time < tree.horizon
        inner = np.flatnonzero((tree.time > 0) & before)
        if (zeta[inner] < zeta[tree.parent[inner]]).any():
            msg = "zeta must be nondecreasing along every path"
            raise ParameterError(msg)
        zeta[~before] = NEG_INF
        eta = solution.eta.values
        distance = float(np.max(np.abs(zeta[before] - eta[before])))
        if distance <= CONSISTENT_TOL:
            return FalsificationResult(Verdict.CONSISTENT, distance)

        Z = obstacle_values(op, X, zeta, f)
        alternative = ObstacleSolution(Z, AdaptedProcess(tree, zeta), solution.orientation, f)
        report = self.verify(op, alternative, X)
        failing = [c.name for c in report.checks if not c.passed and c.name != "representation"]
        epsilon = distance / 2
        if (eta[before] > zeta[before] + epsilon).any():
            direction, (sigma, tau) = "eta_above", self._witness_rules(tree, eta, zeta, epsilon)
        else:
            direction, (sigma, tau) = "zeta_above", self._witness_rules(tree, zeta, eta, epsilon)
        verdict = Verdict.WITNESS if failing else Verdict.UNRESOLVED
        self.log.debug("Alternative at distance %.3g: %s %s", distance, verdict.value, failing)
        return FalsificationResult(
            verdict, distance, epsilon, direction, sigma, tau, failing, report
        )

    def stopping_link(self, op: NonlinearExpectation, X, solution: ObstacleSolution) -> dict:
        """Level passages of eta at 0 against the brute-force stopping value."""
        if solution.f.family is not Family.IDENTITY:
            msg = "the stopping link needs f = identity"
            raise ParameterError(msg)
        tree = op.tree
        X = as_array(X, tree)
        lower = first_hitting(solution.eta, 0.0, strict=False)
        upper = first_hitting(solution.eta, 0.0, strict=True)
        Y = solution.Y.values
        brute = StoppingSolver(parent=self).brute_force_value(op, X)
        out = {"brute_force_value": brute.value}
        passed = True
        for name, rule in (("tau_lower", lower), ("tau_upper", upper)):
            stops = np.fromiter(rule.stops, dtype=int)
            value = float(op.evaluate_stopped(X, rule.mask)[0])
            flat = float(np.max(np.abs(Y[stops] - X[stops])))
            ok = abs(value - brute.value) <= self.tol_check and flat <= self.tol_check
            passed &= ok
            out[name] = {"rule": rule.describe(), "value": value, "flat_off": flat, "passed": ok}
        out["passed"] = passed
        return out


def solve_obstacle(op, X, f: FSpec | None = None, **kw) -> ObstacleSolution:
    return ObstacleSolver(**kw).solve(op, X, f)


def verify_obstacle(op, solution: ObstacleSolution, X, **kw) -> ObstacleReport:
    return ObstacleSolver(**kw).verify(op, solution, X)


def falsify_alternative(op, X, zeta, solution=None, f=None, **kw) -> FalsificationResult:
    return ObstacleSolver(**kw).falsify(op, X, zeta, solution, f)


def stopping_link(op, X, solution: ObstacleSolution, **kw) -> dict:
    return ObstacleSolver(**kw).stopping_link(op, X, solution)
