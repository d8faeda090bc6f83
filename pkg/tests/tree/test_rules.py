"""Tests for stopping rules"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import math

import numpy as np
import pytest

from nlrepr.tree import (
    AdaptedProcess,
    Decision,
    StoppingRule,
    enumerate_rules,
    enumerate_stop_sets,
    first_hitting,
    stopped_terminal,
)
from nlrepr.utils.exceptions import EnumerationGuardError, StoppingRuleError

from ..base import TestsBase


class TestStoppingRule(TestsBase):
    def test_constant(self):
        tree = self.binomial(2)
        rule = StoppingRule.constant(tree, 1)
        np.testing.assert_array_equal(rule.stop_nodes, [1, 1, 2, 2])
        np.testing.assert_array_equal(rule.leaf_times, [1, 1, 1, 1])
        assert rule.decision(1) is Decision.STOP
        assert rule.decision(0) is Decision.CONTINUE

    def test_antichain_required(self):
        tree = self.binomial(2)
        with pytest.raises(StoppingRuleError):
            StoppingRule(tree, frozenset({1, 3, 2}))

    def test_unstopped_path(self):
        tree = self.binomial(2)
        with pytest.raises(StoppingRuleError):
            StoppingRule(tree, frozenset({1}))
        rule = StoppingRule(tree, frozenset({1}), extended=True)
        assert rule.describe() == "1;1;inf;inf"
        assert rule.capped().describe() == "1;1;2;2"

    def test_never(self):
        tree = self.chain(2)
        rule = StoppingRule.never(tree)
        assert math.isinf(rule.leaf_times[0])


class TestFirstHitting(TestsBase):
    def test_weak(self):
        tree = self.chain(2)
        L = AdaptedProcess(tree, [-1.0, 0.0, 2.0])
        assert first_hitting(L, 0.0).leaf_times[0] == 1

    def test_strict(self):
        tree = self.chain(2)
        L = AdaptedProcess(tree, [-1.0, 0.0, 2.0])
        assert first_hitting(L, 0.0, strict=True).leaf_times[0] == 2

    def test_never_hit(self):
        tree = self.chain(2)
        L = AdaptedProcess(tree, [-1.0, -1.0, -1.0])
        rule = first_hitting(L, 0.0, cap_at_N=False)
        assert rule.extended
        assert math.isinf(rule.leaf_times[0])
        assert first_hitting(L, 0.0).leaf_times[0] == 2

    def test_binomial_paths(self):
        tree = self.binomial(2)
        L = AdaptedProcess(tree, [-1.0, 1.0, -1.0, 0.0, 0.0, 2.0, -3.0])
        rule = first_hitting(L, 0.0)
        np.testing.assert_array_equal(rule.leaf_times, [1, 1, 2, 2])
        X = AdaptedProcess(tree, np.arange(7.0))
        np.testing.assert_array_equal(stopped_terminal(X, rule).values, [1, 1, 5, 6])


class TestStoppedTerminal(TestsBase):
    def test_default_value(self):
        tree = self.chain(1)
        X = AdaptedProcess(tree, [3.0, 1.0])
        rule = StoppingRule(tree, frozenset(), extended=True)
        with pytest.raises(StoppingRuleError):
            stopped_terminal(X, rule)
        assert stopped_terminal(X, rule, default_value=0.0).values[0] == 0.0

    def test_discount(self):
        tree = self.chain(1)
        X = AdaptedProcess(tree, [3.0, 1.0])
        rule = StoppingRule.constant(tree, 1)
        out = stopped_terminal(X, rule, discount=[1.0, 0.5])
        assert out.values[0] == 0.5


class TestEnumeration(TestsBase):
    def test_binomial_two(self):
        assert len(enumerate_rules(self.binomial(2))) == 5

    def test_binomial_four(self):
        assert len(enumerate_stop_sets(self.binomial(4))) == 677

    def test_chain(self):
        rules = enumerate_rules(self.chain(3))
        assert sorted(int(r.leaf_times[0]) for r in rules) == [0, 1, 2, 3]

    def test_extended(self):
        # a leaf may also continue: S(leaf) = 2, S(1) = 1 + 4, S(0) = 1 + 25
        assert len(enumerate_rules(self.binomial(2), extended=True)) == 26

    def test_after_sigma(self):
        tree = self.binomial(2)
        sigma = StoppingRule.constant(tree, 1)
        rules = enumerate_rules(tree, after=sigma)
        assert len(rules) == 1
        assert (rules[0].leaf_times == 2).all()

    def test_guard(self):
        with pytest.raises(EnumerationGuardError):
            enumerate_rules(self.binomial(4), max_rules=100)
        with pytest.raises(EnumerationGuardError):
            enumerate_rules(self.binomial(4), max_leaves=8)
