"""Tests for the American put exercise signal"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import math

import numpy as np
import pytest

from nlrepr.american import (
    AmericanPut,
    MarketSpec,
    PayoffMode,
    boundary_residual,
    build_crr,
    check_exercise_criterion,
    exercise_times,
    put_value,
    solve_boundary,
    strike_sweep,
    sweep_long,
)
from nlrepr.american.put import SWEEP_COLUMNS
from nlrepr.expectation import DriverSpec, NonlinearExpectation, OperatorSpec, Variant
from nlrepr.tree import AdaptedProcess, StoppingRule
from nlrepr.utils.exceptions import NonTowerOperatorError, ParameterError

from ..base import TestsBase, linear, z_driver


class TestBoundary(TestsBase):
    def flat_market(self, N=2, price=100.0, rate=0.05):
        tree = self.chain(N)
        return MarketSpec(AdaptedProcess(tree, np.full(N + 1, price)), rate)

    def test_constant_prices(self):
        market = self.flat_market()
        op = linear(market.tree)
        K = solve_boundary(op, market)
        np.testing.assert_allclose(K.values, 100.0, atol=1e-8)
        assert boundary_residual(op, market, K) <= 1e-9

    def test_dominates_prices(self):
        market = build_crr(3, 100.0, 1.1, 0.9, 0.02)
        op = z_driver(market.tree, kappa=0.1)
        K = solve_boundary(op, market)
        assert (K.values >= market.prices.values - 1e-9).all()
        assert boundary_residual(op, market, K) <= 1e-9

    def test_requires_tower(self):
        market = self.flat_market(N=1)
        spec = OperatorSpec(Variant.ALPHA_MAXMIN, DriverSpec("ABS_Z", 0.0), alpha=0.5)
        op = NonlinearExpectation(spec, market.tree)
        with pytest.raises(NonTowerOperatorError):
            solve_boundary(op, market)


class TestExercise(TestsBase):
    def test_exercise_times(self):
        tree = self.chain(2)
        K = [100.0, 90.0, 80.0]
        lower, upper = exercise_times(K, 95.0, tree)
        assert lower.leaf_times[0] == upper.leaf_times[0] == 1
        lower, upper = exercise_times(K, 90.0, tree)
        assert (lower.leaf_times[0], upper.leaf_times[0]) == (1, 2)
        lower, _ = exercise_times(K, 50.0, tree)
        assert math.isinf(lower.leaf_times[0])
        with pytest.raises(ParameterError):
            exercise_times(K, -1.0, tree)

    def test_criterion(self):
        tree = self.chain(2)
        K = [100.0, 90.0, 80.0]
        assert check_exercise_criterion(K, 90.0, StoppingRule.constant(tree, 2)).passed
        assert not check_exercise_criterion(K, 90.0, StoppingRule.constant(tree, 0)).passed
        assert check_exercise_criterion(K, 50.0, StoppingRule.never(tree)).passed

    def test_strike_above_price(self):
        tree = self.chain(2)
        market = MarketSpec(AdaptedProcess(tree, [100.0, 100.0, 100.0]), 0.05)
        op = linear(tree)
        K = solve_boundary(op, market)
        _, upper = exercise_times(K, 110.0)
        assert upper.leaf_times[0] == 0
        assert put_value(op, market, 110.0, upper) == pytest.approx(10.0)

    def test_payoff_modes(self):
        tree = self.chain(1)
        market = MarketSpec(AdaptedProcess(tree, [100.0, 120.0]), 0.25)
        op = linear(tree)
        never = StoppingRule.never(tree)
        assert put_value(op, market, 110.0, never) == 0.0
        at_end = StoppingRule.constant(tree, 1)
        assert put_value(op, market, 110.0, at_end) == pytest.approx(-8.0)
        assert put_value(op, market, 110.0, at_end, PayoffMode.POSITIVE_PART) == 0.0


class TestSweep(TestsBase):
    def test_classical_agreement(self):
        market = build_crr(3, 100.0, 1.1, 0.9, 0.02)
        frame = strike_sweep(linear(market.tree), market, strikes=[85.0, 95.0, 105.0, 115.0])
        assert list(frame.columns) == SWEEP_COLUMNS
        np.testing.assert_allclose(frame["value"], frame["classical"], atol=1e-8)
        np.testing.assert_allclose(frame["value"], frame["snell"], atol=1e-8)
        assert frame["dominance"].all()
        assert frame["signal_below_strike"].all()
        assert frame["criterion_upper"].all()

    def test_z_driver_gap(self):
        market = build_crr(2, 100.0, 1.1, 0.9, 0.02)
        solver = AmericanPut(threads=2)
        frame = solver.sweep(z_driver(market.tree, kappa=0.1), market, strikes=[90.0, 100.0, 110.0])
        assert (frame["gap"] <= 1e-8).all()
        assert frame["classical"].notna().all()

    def test_candidates(self):
        market = build_crr(2, 100.0, 1.1, 0.9, 0.02)
        solver = AmericanPut(enumerate_candidates=True)
        frame = solver.sweep(linear(market.tree), market, strikes=[100.0])
        assert frame.columns[-2:].tolist() == ["n_candidates", "candidate_gap"]
        assert frame["n_candidates"].iloc[0] >= 1
        assert frame["candidate_gap"].iloc[0] <= 1e-8

    def test_default_grid(self):
        market = build_crr(2, 100.0, 1.1, 0.9, 0.02)
        frame = AmericanPut(grid_size=5).sweep(linear(market.tree), market)
        assert len(frame) == 5

    def test_long_table(self):
        tree = self.chain(1)
        market = MarketSpec(AdaptedProcess(tree, [100.0, 100.0]), 0.05)
        frame = strike_sweep(linear(tree), market, strikes=[90.0, 110.0])
        long = sweep_long(frame)
        assert list(long.columns) == ["k", "series", "value"]
        assert "classical" not in set(long["series"])
        assert len(long) == 8

    def test_empty_grid(self):
        tree = self.chain(1)
        market = MarketSpec(AdaptedProcess(tree, [100.0, 100.0]), 0.05)
        with pytest.raises(ParameterError):
            strike_sweep(linear(tree), market, strikes=[])


def test_classical_grid():
    market = build_crr(6, 100.0, 1.1, 0.9, 0.02)
    strikes = np.linspace(70.0, 130.0, 20)
    frame = strike_sweep(linear(market.tree), market, strikes=strikes)
    assert len(frame) == 20
    np.testing.assert_allclose(frame["value"], frame["classical"], rtol=0, atol=1e-10)
    np.testing.assert_allclose(frame["value"], frame["snell"], rtol=0, atol=1e-10)


def test_z_driver_grid():
    market = build_crr(4, 100.0, 1.1, 0.9, 0.02)
    op = z_driver(market.tree, kappa=0.2)
    K = solve_boundary(op, market)
    assert (K.values >= market.prices.values - 1e-9).all()
    assert boundary_residual(op, market, K) <= 1e-9
    frame = strike_sweep(op, market, strikes=np.linspace(80.0, 120.0, 9), K=K)
    assert (frame["gap"] <= 1e-8).all()
    assert frame["criterion_upper"].all()
