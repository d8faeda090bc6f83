"""Backward-induction solver for the non-linear stochastic representation."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from traitlets import Float, Integer

from nlrepr.expectation import NonlinearExpectation
from nlrepr.tree import NEG_INF, AdaptedProcess, StoppingRule, enumerate_stop_sets, path_running_max
from nlrepr.utils.base import NlreprBase
from nlrepr.utils.exceptions import ParameterError, StoppingRuleError

from .functions import FSpec
from .roots import RootResult, solve_monotone


class Formulation(str, enum.Enum):
    """PLAIN sums ``f`` up to the horizon; TERMINAL stops at ``N - 1`` and adds ``X_N``."""

    PLAIN = "PLAIN"
    TERMINAL = "TERMINAL"


@dataclass(frozen=True, eq=False)
class RepresentationProblem:
    X: AdaptedProcess
    f: FSpec
    operator: NonlinearExpectation
    variant: Formulation = Formulation.PLAIN

    def __post_init__(self):
        object.__setattr__(self, "variant", Formulation(self.variant))
        if self.X.tree is not self.operator.tree:
            msg = "the process and the operator live on different trees"
            raise ParameterError(msg)
        self.f.check_horizon(self.tree.horizon)

    @property
    def tree(self):
        return self.operator.tree

    @property
    def last_time(self) -> int:
        """Last time at which ``L`` is defined."""
        N = self.tree.horizon
        return N if self.variant is Formulation.PLAIN else N - 1


@dataclass
class RepresentationResult:
    problem: RepresentationProblem
    L: AdaptedProcess
    iterations: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    max_phi: float
    residual: float = float("nan")

    def brackets(self) -> list[dict]:
        tree = self.problem.tree
        return [
            {
                "node_id": tree.labels[n],
                "lo": self.lo[n],
                "hi": self.hi[n],
                "iterations": int(self.iterations[n]),
            }
            for n in range(tree.n_nodes)
            if np.isfinite(self.lo[n])
        ]


@dataclass
class CharacterizationEntry:
    node: str
    time: int
    L: float
    minimum: float
    gap: float
    argmin: list[str]
    n_rules: int
    lower_violation: float
    tau_star_l: float
    tau_star_gap: float
    exact: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class CharacterizationReport:
    entries: list[CharacterizationEntry] = field(default_factory=list)
    tol_gap: float = 1e-8
    tol_lower: float = 1e-9

    @property
    def max_gap(self) -> float:
        return max((e.gap for e in self.entries if e.exact), default=0.0)

    @property
    def passed(self) -> bool:
        for e in self.entries:
            if e.lower_violation > self.tol_lower:
                return False
            if e.exact and (e.gap > self.tol_gap or e.tau_star_gap > self.tol_lower):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_gap": self.max_gap,
            "entries": [e.to_dict() for e in self.entries],
        }


def tau_star(L, t: int, tree=None) -> StoppingRule:
    """First time after ``t`` at which ``L`` strictly exceeds ``L_t``, capped at ``N``.

    Only times ``t+1..N-1`` are searched.
    """
    tree = tree if tree is not None else L.tree
    values = np.asarray(getattr(L, "values", L), dtype=float)
    N = tree.horizon
    if not 0 <= t <= N - 1:
        msg = f"tau_star needs 0 <= t <= {N - 1}, got {t}"
        raise ParameterError(msg)
    anc = tree.ancestors
    start = values[anc[:, t]]
    later = values[anc[:, t + 1 : N]] > start[:, None]
    first = np.where(later.any(axis=1), later.argmax(axis=1) + t + 1, N)
    nodes = anc[np.arange(tree.n_leaves), first]
    return StoppingRule(tree, frozenset(nodes.tolist()))


class RepresentationSolver(NlreprBase):
    """Solve ``X_t = E_t[sum_u f(u, max_{t<=v<=u} L_v)]`` node by node.

    Each level is solved by vectorized bracketing and bisection over all of
    its nodes at once; the already-solved future of ``L`` is frozen.
    """

    bracket_width = Float(1.0, help="Half width of the first bracket around the start value.").tag(
        config=True
    )
    bracket_factor = Float(2.0, help="Geometric growth factor of bracket expansion.").tag(
        config=True
    )
    bracket_limit = Float(
        1e300, help="Bracket expansion fails once |xi| would exceed this value."
    ).tag(config=True)
    max_bisections = Integer(4000, help="Bisection steps allowed per level.").tag(config=True)

    def _roots(self, func, x0, increasing) -> RootResult:
        return solve_monotone(
            func,
            x0,
            increasing,
            ftol=self.tol_root,
            xrtol=self.tol_bracket,
            width=self.bracket_width,
            factor=self.bracket_factor,
            limit=self.bracket_limit,
            maxiter=self.max_bisections,
        )

    def root_functional(self, problem: RepresentationProblem, L, t: int):
        """``Phi`` for the time-``t`` nodes given ``L`` at times after ``t``.

        The returned callable maps one trial value per time-``t`` node to the
        residual ``E_t[f~(t, N, xi)] - X_t`` at those nodes.
        """
        tree, f, op = problem.tree, problem.f, problem.operator
        N = tree.horizon
        if not 0 <= t <= problem.last_time:
            msg = f"no root functional at time {t}"
            raise ParameterError(msg)
        X = problem.X.values
        L = np.asarray(getattr(L, "values", L), dtype=float)
        owner = tree.ancestors[:, t] - tree.level_start[t]
        target = X[tree.level(t)]
        if problem.variant is Formulation.PLAIN:
            stop, base = N + 1, 0.0
        else:
            stop, base = N, X[tree.leaves]
        if t + 1 < stop:
            future = path_running_max(L, t + 1, tree).values[tree.ancestors[:, t + 1 : stop]]
            times = np.arange(t + 1, stop)
        else:
            future = None

        def phi(xi):
            xi = np.asarray(xi, dtype=float)
            own = xi[owner]
            total = f(t, own) + base
            if future is not None:
                total = total + f(times, np.maximum(own[:, None], future)).sum(axis=1)
            return op.condexp(t, total) - target

        return phi

    def solve(self, problem: RepresentationProblem) -> RepresentationResult:
        """Backward induction from the anchor time to the root."""
        op = problem.operator
        op.require()
        tree, f = problem.tree, problem.f
        N = tree.horizon
        X = problem.X.values
        L = np.full(tree.n_nodes, NEG_INF)
        iterations = np.zeros(tree.n_nodes, dtype=int)
        lo = np.full(tree.n_nodes, np.nan)
        hi = np.full(tree.n_nodes, np.nan)
        worst = 0.0

        def record(level, res):
            nonlocal worst
            L[level], iterations[level] = res.x, res.iterations
            lo[level], hi[level] = res.lo, res.hi
            worst = max(worst, res.max_abs_f)

        if problem.variant is Formulation.PLAIN:
            leaves = tree.leaves
            target = X[leaves]
            res = self._roots(lambda x: f(N, x) - target, np.zeros(tree.n_leaves), f.increasing)
            record(leaves, res)
        for t in range(N - 1, -1, -1):
            level = tree.level(t)
            first_child = L[tree.child_start[level]]
            x0 = np.where(np.isfinite(first_child), first_child, 0.0)
            res = self._roots(self.root_functional(problem, L, t), x0, f.increasing)
            record(level, res)
            self.log.debug(
                "Solved time %i: %i nodes, %i bisection steps, %i expansions",
                t,
                tree.width(t),
                int(res.iterations.max(initial=0)),
                res.expansions,
            )
        if worst > self.tol_root:
            self.log.warning(
                "Root tolerance not met before floating resolution (|Phi| = %.3g)", worst
            )
        result = RepresentationResult(
            problem, AdaptedProcess(tree, L), iterations, lo, hi, worst
        )
        result.residual = self.residual(problem, result.L)
        return result

    def residual_by_node(self, problem: RepresentationProblem, L) -> np.ndarray:
        """``|X_n - E_t[sum_u f(u, running max of L from t)](n)|`` per node.

        Every expectation is a fresh leaf functional followed by a full
        backward pass; nodes at which ``L`` is undefined carry 0.
        """
        tree, f, op = problem.tree, problem.f, problem.operator
        N = tree.horizon
        X = problem.X.values
        L = np.asarray(getattr(L, "values", L), dtype=float)
        plain = problem.variant is Formulation.PLAIN
        out = np.zeros(tree.n_nodes)
        for t in range(problem.last_time + 1):
            stop = N + 1 if plain else N
            running = path_running_max(L, t, tree).values[tree.ancestors[:, t:stop]]
            total = f(np.arange(t, stop), running).sum(axis=1)
            if not plain:
                total = total + X[tree.leaves]
            out[tree.level(t)] = np.abs(X[tree.level(t)] - op.condexp(t, total))
        return out

    def residual(self, problem: RepresentationProblem, L) -> float:
        return float(self.residual_by_node(problem, L).max())

    # ------------------------------------------------------------------
    # l_{sigma, tau}
    # ------------------------------------------------------------------

    def _solve_l_batch(self, problem, node: int, stops: np.ndarray) -> np.ndarray:
        """``l_{sigma,tau}`` at ``node`` for each row of stopping nodes.

        ``stops`` has shape ``(R, leaves below node)`` and holds, per rule and
        leaf, the node at which the rule stops.
        """
        tree, f, op = problem.tree, problem.f, problem.operator
        N = tree.horizon
        t = int(tree.time[node])
        X = problem.X.values
        stops = np.atleast_2d(stops)
        stop_time = tree.time[stops]
        if (stop_time <= t).any():
            msg = f"tau must stop strictly after node {tree.labels[node]!r}"
            raise StoppingRuleError(msg)
        times = np.arange(t, N)
        running = times < stop_time[..., None]
        payoff = X[stops]
        lo, hi = tree.leaf_lo[node], tree.leaf_hi[node]
        local = node - tree.level_start[t]
        target = X[node]

        def phi(l):
            reward = f(times, l[:, None])
            inner = (running * reward[:, None, :]).sum(axis=-1) + payoff
            full = np.zeros((inner.shape[0], tree.n_leaves))
            full[:, lo:hi] = inner
            return op.condexp(t, full)[:, local] - target

        return self._roots(phi, np.zeros(stops.shape[0]), problem.f.increasing).x

    def solve_l(self, problem: RepresentationProblem, sigma_node: int, tau: StoppingRule) -> float:
        """The unique root ``l`` of ``X_sigma = E_sigma[sum_{u<tau} f(u, l) + X_tau]``."""
        problem.operator.require()
        tree = problem.tree
        if int(tree.time[sigma_node]) >= tree.horizon:
            msg = "sigma must lie before the horizon"
            raise StoppingRuleError(msg)
        stops = tau.stop_nodes[tree.leaf_lo[sigma_node] : tree.leaf_hi[sigma_node]]
        if (stops < 0).any():
            msg = "tau leaves paths below sigma unstopped"
            raise StoppingRuleError(msg)
        return float(self._solve_l_batch(problem, sigma_node, stops[None, :])[0])

    def _rules_below(self, tree, node):
        """Stopping-node matrix of every rule stopping strictly below ``node``."""
        t = int(tree.time[node])
        allowed = tree.time > t
        sets = enumerate_stop_sets(
            tree, node, allowed, max_leaves=self.max_leaves, max_rules=self.max_rules
        )
        masks = np.zeros((len(sets), tree.n_nodes), dtype=bool)
        for i, stops in enumerate(sets):
            masks[i, list(stops)] = True
        anc = tree.ancestors[tree.leaf_lo[node] : tree.leaf_hi[node], t + 1 :]
        hits = masks[:, anc]
        column = hits.argmax(axis=-1)
        return sets, np.take_along_axis(
            np.broadcast_to(anc, hits.shape), column[..., None], axis=-1
        )[..., 0]

    def essinf_characterization(
        self, problem: RepresentationProblem, L, sigma: StoppingRule
    ) -> CharacterizationReport:
        """Compare ``L_sigma`` with ``min_tau l_{sigma,tau}`` over every ``tau > sigma``.

        The equality is exact wherever the capped ``tau_star`` collects the
        full tail of the sum: always for the TERMINAL formulation, and for the
        PLAIN one at nodes where ``L_N >= L_sigma`` on the paths reaching the
        horizon without a strict exceedance. Elsewhere the gap is reported.
        """
        op = problem.operator
        op.require(tower=True, translation_invariant=True)
        tree = problem.tree
        N = tree.horizon
        L = np.asarray(getattr(L, "values", L), dtype=float)
        if sigma.extended or (tree.time[list(sigma.stops)] >= N).any():
            msg = "sigma must stop before the horizon on every path"
            raise StoppingRuleError(msg)
        report = CharacterizationReport(tol_lower=self.tol_check)
        for node in sorted(sigma.stops):
            t = int(tree.time[node])
            sets, stops = self._rules_below(tree, node)
            values = self._solve_l_batch(problem, node, stops)
            best = int(np.argmin(values))

            lo, hi = tree.leaf_lo[node], tree.leaf_hi[node]
            star = tau_star(L, t, tree).stop_nodes[lo:hi]
            star_l = float(self._solve_l_batch(problem, node, star[None, :])[0])
            exact = True
            if problem.variant is Formulation.PLAIN:
                leaves_at_N = star[tree.time[star] == N]
                exact = bool((L[leaves_at_N] >= L[node] - self.tol_check).all())

            entry = CharacterizationEntry(
                node=tree.labels[node],
                time=t,
                L=float(L[node]),
                minimum=float(values[best]),
                gap=float(abs(values[best] - L[node])),
                argmin=sorted(tree.labels[s] for s in sets[best]),
                n_rules=len(sets),
                lower_violation=float(max(L[node] - values.min(), 0.0)),
                tau_star_l=star_l,
                tau_star_gap=float(abs(star_l - L[node])),
                exact=exact,
            )
            self.log.debug(
                "Node %s: L=%.12g, min l=%.12g over %i rules",
                entry.node,
                entry.L,
                entry.minimum,
                entry.n_rules,
            )
            report.entries.append(entry)
        return report


def solve(problem: RepresentationProblem, **kw) -> RepresentationResult:
    return RepresentationSolver(**kw).solve(problem)


def residual(problem: RepresentationProblem, L, **kw) -> float:
    return RepresentationSolver(**kw).residual(problem, L)


def solve_l(problem: RepresentationProblem, sigma_node: int, tau: StoppingRule, **kw) -> float:
    return RepresentationSolver(**kw).solve_l(problem, sigma_node, tau)


def essinf_characterization(problem, L, sigma: StoppingRule, **kw) -> CharacterizationReport:
    return RepresentationSolver(**kw).essinf_characterization(problem, L, sigma)
