"""Tests for RepresentationSolver"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import numpy as np
import pytest
from traitlets import TraitError
from traitlets.config import Config

from nlrepr.expectation import DriverSpec, NonlinearExpectation, OperatorSpec, Variant
from nlrepr.representation import (
    Formulation,
    FSpec,
    RepresentationProblem,
    RepresentationSolver,
    solve,
    solve_l,
    tau_star,
)
from nlrepr.tree import AdaptedProcess, StoppingRule, build_binomial, build_chain
from nlrepr.utils.exceptions import (
    NonTowerOperatorError,
    ParameterError,
    StoppingRuleError,
    UncertifiedOperatorError,
)

from ..base import TestsBase, linear, random_process, yz_driver, z_driver

NEG = FSpec.affine(a=0.0, b=1.0)


class TestSolve(TestsBase):
    def chain_problem(self, f=NEG):
        tree = self.chain(1)
        return RepresentationProblem(AdaptedProcess(tree, [3.0, 1.0]), f, linear(tree))

    def test_chain_decreasing(self):
        result = solve(self.chain_problem())
        np.testing.assert_allclose(result.L.values, [-2.0, -1.0], atol=1e-9)
        assert result.residual <= 1e-9

    def test_chain_identity(self):
        result = solve(self.chain_problem(FSpec.identity()))
        np.testing.assert_allclose(result.L.values, [1.5, 1.0], atol=1e-9)

    def test_brackets(self):
        result = solve(self.chain_problem())
        brackets = result.brackets()
        assert [b["node_id"] for b in brackets] == ["0", "1"]
        for b in brackets:
            assert b["lo"] <= b["hi"]

    def test_binomial_z_driver(self):
        tree = self.binomial(3)
        X = random_process(tree, seed=1)
        result = solve(RepresentationProblem(X, NEG, z_driver(tree)))
        assert result.residual <= 1e-9
        assert np.isfinite(result.L.values).all()

    def test_yz_driver(self):
        tree = self.binomial(2)
        X = random_process(tree, seed=2)
        result = solve(RepresentationProblem(X, FSpec.identity(), yz_driver(tree)))
        assert result.residual <= 1e-9

    def test_terminal(self):
        tree = self.binomial(2)
        X = random_process(tree, seed=4)
        problem = RepresentationProblem(X, NEG, linear(tree), Formulation.TERMINAL)
        result = solve(problem)
        assert problem.last_time == 1
        assert (result.L.values[tree.leaves] == -np.inf).all()
        assert np.isfinite(result.L.values[: tree.leaves.start]).all()
        assert result.residual <= 1e-9

    def test_residual_detects_perturbation(self):
        tree = self.binomial(2)
        X = random_process(tree, seed=5)
        problem = RepresentationProblem(X, NEG, z_driver(tree))
        solver = RepresentationSolver()
        L = solver.solve(problem).L.values.copy()
        L[0] += 0.5
        assert solver.residual_by_node(problem, L)[0] > 0.1

    def test_uncertified(self):
        tree = self.binomial(1)
        spec = OperatorSpec(Variant.Z_DRIVER, DriverSpec("ABS_Z", 2.0))
        op = NonlinearExpectation(spec, tree, validate=False)
        with pytest.raises(UncertifiedOperatorError):
            solve(RepresentationProblem(random_process(tree), NEG, op))

    def test_trees_must_match(self):
        with pytest.raises(ParameterError):
            RepresentationProblem(random_process(self.chain(1)), NEG, linear(self.chain(1)))

    def test_config(self):
        config = Config({"NlreprBase": {"tol_root": 1e-8}})
        assert RepresentationSolver(config=config).tol_root == 1e-8
        with pytest.raises(TraitError):
            RepresentationSolver(tol_root=0.0)


class TestSolveL(TestsBase):
    def test_chain(self):
        tree = self.chain(1)
        problem = RepresentationProblem(AdaptedProcess(tree, [3.0, 1.0]), NEG, linear(tree))
        tau = StoppingRule.constant(tree, 1)
        assert solve_l(problem, 0, tau) == pytest.approx(-2.0, abs=1e-9)

    def test_tau_must_follow_sigma(self):
        tree = self.chain(2)
        problem = RepresentationProblem(random_process(tree), NEG, linear(tree))
        solver = RepresentationSolver()
        with pytest.raises(StoppingRuleError):
            solver.solve_l(problem, 1, StoppingRule.constant(tree, 1))
        with pytest.raises(StoppingRuleError):
            solver.solve_l(problem, 2, StoppingRule.constant(tree, 2))
        with pytest.raises(StoppingRuleError):
            solver.solve_l(problem, 0, StoppingRule.never(tree))


class TestTauStar(TestsBase):
    def test_first_strict_exceedance(self):
        tree = self.chain(3)
        rule = tau_star([0.0, -1.0, 2.0, 5.0], 0, tree)
        assert rule.leaf_times[0] == 2

    def test_capped(self):
        tree = self.chain(3)
        assert tau_star([0.0, 0.0, -1.0, 5.0], 0, tree).leaf_times[0] == 3

    def test_bad_time(self):
        with pytest.raises(ParameterError):
            tau_star([0.0, 0.0], 1, self.chain(1))


class TestCharacterization(TestsBase):
    def test_terminal_linear(self):
        tree = self.binomial(3)
        problem = RepresentationProblem(
            random_process(tree, seed=6), NEG, linear(tree), Formulation.TERMINAL
        )
        solver = RepresentationSolver()
        L = solver.solve(problem).L
        report = solver.essinf_characterization(problem, L, StoppingRule.constant(tree, 0))
        assert report.passed
        assert report.max_gap <= 1e-8
        entry = report.entries[0]
        assert entry.exact
        assert entry.n_rules == 25
        assert entry.lower_violation <= 1e-9

    def test_terminal_z_driver(self):
        tree = self.binomial(3)
        problem = RepresentationProblem(
            random_process(tree, seed=8), NEG, z_driver(tree), Formulation.TERMINAL
        )
        solver = RepresentationSolver()
        L = solver.solve(problem).L
        report = solver.essinf_characterization(problem, L, StoppingRule.constant(tree, 1))
        assert [e.node for e in report.entries] == ["1", "2"]
        assert report.passed

    def test_needs_translation_invariance(self):
        tree = self.binomial(2)
        problem = RepresentationProblem(random_process(tree), NEG, yz_driver(tree))
        with pytest.raises(NonTowerOperatorError):
            RepresentationSolver().essinf_characterization(
                problem, np.zeros(tree.n_nodes), StoppingRule.constant(tree, 0)
            )

    def test_sigma_before_horizon(self):
        tree = self.binomial(2)
        problem = RepresentationProblem(random_process(tree), NEG, linear(tree))
        with pytest.raises(StoppingRuleError):
            RepresentationSolver().essinf_characterization(
                problem, np.zeros(tree.n_nodes), StoppingRule.constant(tree, 2)
            )

    def test_plain_tail_entries(self):
        # paths reaching the horizon with L_N < L_sigma end in different terminal rewards
        tree = self.binomial(3)
        solver = RepresentationSolver()
        sigma = StoppingRule.constant(tree, 0)
        tails = []
        for seed in range(30):
            problem = RepresentationProblem(random_process(tree, seed=seed), NEG, linear(tree))
            L = solver.solve(problem).L
            report = solver.essinf_characterization(problem, L, sigma)
            assert report.passed
            for entry in report.entries:
                assert entry.lower_violation <= 1e-9
                if entry.exact:
                    assert entry.gap <= 1e-8
                else:
                    tails.append(entry)
        assert tails
        assert max(e.gap for e in tails) > 1e-6
        assert report.to_dict()["max_gap"] <= 1e-8


CHARACTERIZED = [
    ("binomial", 2, "LINEAR"),
    ("binomial", 3, "Z_DRIVER"),
    ("binomial", 4, "LINEAR"),
    ("binomial", 4, "Z_DRIVER"),
    ("chain", 5, "LINEAR"),
    ("chain", 8, "Z_DRIVER"),
]


@pytest.mark.parametrize(("kind", "N", "variant"), CHARACTERIZED)
def test_characterization_grid(kind, N, variant):
    tree = build_binomial(N) if kind == "binomial" else build_chain(N)
    op = linear(tree) if variant == "LINEAR" else z_driver(tree)
    solver = RepresentationSolver()
    for seed in range(3):
        problem = RepresentationProblem(
            random_process(tree, seed=seed), NEG, op, Formulation.TERMINAL
        )
        L = solver.solve(problem).L
        for t in sorted({0, N - 1}):
            report = solver.essinf_characterization(problem, L, StoppingRule.constant(tree, t))
            assert report.passed, report.to_dict()
            for entry in report.entries:
                assert entry.exact
                assert entry.gap <= 1e-8
                assert entry.lower_violation <= 1e-9
                assert entry.tau_star_gap <= 1e-9


def operator_for(name, tree):
    if name == "LINEAR":
        return linear(tree)
    if name == "ABS_Z":
        return z_driver(tree)
    if name == "NEG_ABS_Z":
        return z_driver(tree, form="NEG_ABS_Z")
    if name == "YZ_DRIVER":
        return yz_driver(tree)
    spec = OperatorSpec(Variant.ALPHA_MAXMIN, DriverSpec("ABS_Z", 0.2), alpha=0.3)
    return NonlinearExpectation(spec, tree)


SHAPES = {
    "AFFINE": NEG,
    "PIECEWISE": FSpec.piecewise(knots=(-1.0, 0.0, 1.0), values=(-2.0, 0.0, 0.5)),
}


@pytest.mark.parametrize("formulation", list(Formulation))
@pytest.mark.parametrize("shape", sorted(SHAPES))
@pytest.mark.parametrize("name", ["LINEAR", "ABS_Z", "NEG_ABS_Z", "YZ_DRIVER", "ALPHA_MAXMIN"])
def test_random_residuals(name, shape, formulation):
    rng = np.random.default_rng(0)
    solver = RepresentationSolver()
    for seed in range(10):
        N = int(rng.integers(1, 9))
        tree = build_chain(N) if seed % 2 else build_binomial(min(N, 6))
        X = random_process(tree, seed=seed)
        problem = RepresentationProblem(X, SHAPES[shape], operator_for(name, tree), formulation)
        result = solver.solve(problem)
        assert result.residual <= 1e-9, (name, shape, formulation, seed)
