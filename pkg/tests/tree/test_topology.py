"""Tests for TreeTopology"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import numpy as np
import pytest

from nlrepr.tree import AdaptedProcess, TreeTopology, as_array, path_running_max
from nlrepr.utils.exceptions import ParameterError, TreeStructureError

from ..base import TestsBase


class TestTopology(TestsBase):
    def test_levels_contiguous(self):
        tree = self.binomial(3)
        for t in range(4):
            nodes = tree.nodes_at(t)
            assert (tree.time[nodes] == t).all()
            assert tree.width(t) == 2**t

    def test_ancestors(self):
        tree = self.binomial(2)
        # leaves 3..6 hang below 1 (3, 4) and 2 (5, 6)
        np.testing.assert_array_equal(tree.ancestors[:, 1], [1, 1, 2, 2])
        np.testing.assert_array_equal(tree.ancestors[:, 0], [0, 0, 0, 0])
        assert (tree.leaf_lo[2], tree.leaf_hi[2]) == (2, 4)

    def test_children(self):
        tree = self.binomial(2)
        np.testing.assert_array_equal(tree.children(0), [1, 2])
        np.testing.assert_array_equal(tree.children(2), [5, 6])
        np.testing.assert_array_equal(tree.descendants_at(1, 2), [3, 4])

    def test_lift(self):
        tree = self.binomial(2)
        np.testing.assert_array_equal(tree.lift(np.array([10.0, 20.0]), 1), [10, 10, 20, 20])

    def test_probabilities_must_sum(self):
        with pytest.raises(TreeStructureError):
            TreeTopology([-1, 0, 0], [1.0, 0.5, 0.4], [0.0, 1.0, -1.0], 1.0)

    def test_early_leaf(self):
        with pytest.raises(TreeStructureError):
            TreeTopology([-1, 0, 0, 1], [1.0, 0.5, 0.5, 1.0], [0.0, 1.0, -1.0, 0.0], 1.0)

    def test_breadth_first_required(self):
        with pytest.raises(TreeStructureError):
            TreeTopology([-1, 0, 1, 0], [1.0, 0.5, 1.0, 0.5], [0.0, 1.0, 0.0, -1.0], 1.0)

    def test_values_from_mapping(self):
        tree = self.chain(1)
        np.testing.assert_array_equal(tree.values_from_mapping({"0": 3, "1": 1}), [3.0, 1.0])
        with pytest.raises(ParameterError):
            tree.values_from_mapping({"0": 3})
        with pytest.raises(ParameterError):
            tree.index_of("nope")

    def test_as_array_length(self):
        tree = self.chain(2)
        with pytest.raises(ParameterError):
            as_array([1.0, 2.0], tree)

    def test_immutable(self):
        tree = self.binomial(1)
        with pytest.raises(ValueError, match="read-only"):
            tree.prob[1] = 0.2


class TestRunningMax(TestsBase):
    def test_increasing(self):
        tree = self.chain(2)
        out = path_running_max(AdaptedProcess(tree, [-1.0, 0.0, 2.0]), 0)
        np.testing.assert_array_equal(out.values, [-1.0, 0.0, 2.0])

    def test_decreasing(self):
        tree = self.chain(2)
        out = path_running_max(AdaptedProcess(tree, [3.0, 1.0, 2.0]), 0)
        np.testing.assert_array_equal(out.values, [3.0, 3.0, 3.0])

    def test_restart(self):
        tree = self.chain(2)
        out = path_running_max(AdaptedProcess(tree, [3.0, 1.0, 2.0]), 1)
        assert out.values[0] == -np.inf
        np.testing.assert_array_equal(out.values[1:], [1.0, 2.0])

    def test_bad_start(self):
        tree = self.chain(2)
        with pytest.raises(ParameterError):
            path_running_max(AdaptedProcess.constant(tree, 0.0), 3)
