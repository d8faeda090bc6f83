"""Tests for the monotone root finder"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import numpy as np
import pytest

from nlrepr.representation import solve_monotone
from nlrepr.utils.exceptions import BracketError


def test_expands_bracket():
    res = solve_monotone(lambda x: x**3 - 8, [0.0])
    assert res.x[0] == pytest.approx(2.0)
    assert res.expansions >= 1


def test_decreasing():
    res = solve_monotone(lambda x: 5.0 - x, [0.0], increasing=False)
    assert res.x[0] == pytest.approx(5.0, abs=1e-10)
    assert res.max_abs_f <= 1e-11


def test_vectorized():
    targets = np.array([1.0, -3.0, 100.0, 0.1])
    res = solve_monotone(lambda x: x - targets, np.zeros(4))
    np.testing.assert_allclose(res.x, targets, atol=1e-10)
    assert (res.lo <= res.x).all()
    assert (res.x <= res.hi).all()


def test_not_surjective():
    with pytest.raises(BracketError):
        solve_monotone(lambda x: np.arctan(x) + 2.0, [0.0])


def test_iteration_limit():
    with pytest.raises(BracketError):
        solve_monotone(lambda x: x - 0.3, [0.0], maxiter=1)
