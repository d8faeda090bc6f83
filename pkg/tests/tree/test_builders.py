"""Tests for the tree generators"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import numpy as np
import pytest

from nlrepr.tree import binomial_increments, build_binomial, build_chain, build_explicit
from nlrepr.utils.exceptions import ParameterError, TreeStructureError

from ..base import TestsBase


class TestBuilders(TestsBase):
    def test_binomial_counts(self):
        tree = build_binomial(3, p=0.5)
        assert tree.n_nodes == 15
        assert tree.n_leaves == 8
        assert tree.horizon == 3
        assert tree.dim == 1

    def test_binomial_increments_centered(self):
        up, down = binomial_increments(0.3, 2.0, 0.5)
        assert 0.3 * up + 0.7 * down == pytest.approx(0.0, abs=1e-15)
        assert 0.3 * up**2 + 0.7 * down**2 == pytest.approx(4.0 * 0.5)

    def test_binomial_up_first(self):
        tree = build_binomial(2, p=0.25)
        np.testing.assert_allclose(tree.prob[1:3], [0.25, 0.75])
        assert tree.increment[1, 0] > 0 > tree.increment[2, 0]

    def test_binomial_depth_guard(self):
        with pytest.raises(ParameterError):
            build_binomial(5, max_depth=4)
        with pytest.raises(ParameterError):
            build_binomial(0)
        with pytest.raises(ParameterError):
            build_binomial(2, p=1.0)

    def test_chain(self):
        tree = build_chain(3)
        assert tree.n_nodes == 4
        assert tree.n_leaves == 1
        np.testing.assert_array_equal(tree.time, [0, 1, 2, 3])

    def test_explicit_any_order(self):
        nodes = [
            {"id": "u", "parent": "r", "prob": 0.5, "increment": 1.0},
            {"id": "r", "parent": None},
            {"id": "d", "parent": "r", "prob": 0.5, "increment": -1.0},
        ]
        tree = build_explicit(nodes, 1.0)
        assert tree.labels == ("r", "u", "d")
        assert tree.index_of("d") == 2

    def test_explicit_two_roots(self):
        nodes = [{"id": "a", "parent": None}, {"id": "b", "parent": None}]
        with pytest.raises(TreeStructureError):
            build_explicit(nodes, 1.0)

    def test_explicit_uncentered(self):
        nodes = [
            {"id": "r", "parent": None},
            {"id": "u", "parent": "r", "prob": 0.5, "increment": 1.0},
            {"id": "d", "parent": "r", "prob": 0.5, "increment": 0.0},
        ]
        with pytest.raises(TreeStructureError):
            build_explicit(nodes, 1.0)

    def test_document_round_trip(self):
        tree = build_binomial(2, p=0.4, sigma=0.5)
        again = build_explicit(tree.to_document()["nodes"], tree.to_document()["dt"])
        np.testing.assert_allclose(again.prob, tree.prob)
        np.testing.assert_allclose(again.increment, tree.increment)
        np.testing.assert_array_equal(again.parent, tree.parent)
