"""Tests for DriverSpec"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import numpy as np
import pytest

from nlrepr.expectation import DriverForm, DriverSpec
from nlrepr.utils.exceptions import ParameterError


def test_forms():
    z = np.array([[2.0], [-2.0]])
    np.testing.assert_allclose(DriverSpec("LINEAR_Z", 0.5).h(z), [1.0, -1.0])
    np.testing.assert_allclose(DriverSpec("ABS_Z", 0.5).h(z), [1.0, 1.0])
    np.testing.assert_allclose(DriverSpec("NEG_ABS_Z", 0.5).h(z), [-1.0, -1.0])
    piecewise = DriverSpec("PIECEWISE_LINEAR_Z", 0.5, kappa_neg=0.25)
    np.testing.assert_allclose(piecewise.h(z), [1.0, -0.5])
    assert piecewise.z_slope == 0.5


def test_sum_over_dimensions():
    assert DriverSpec("ABS_Z", 1.0).h(np.array([1.0, -2.0])) == 3.0


def test_y_term():
    driver = DriverSpec("ABS_Z", 0.2, lam=-0.4)
    assert driver.has_y_term
    assert driver.true_lipschitz == 0.4
    assert driver.g(0, 1.0, np.array([1.0])) == pytest.approx(-0.2)


def test_declared_lipschitz():
    assert DriverSpec("ABS_Z", 0.2, lipschitz=0.3).K == 0.3
    with pytest.raises(ParameterError):
        DriverSpec("ABS_Z", 0.2, lipschitz=0.1)


def test_invalid():
    with pytest.raises(ParameterError):
        DriverSpec("ZERO", 0.1)
    with pytest.raises(ParameterError):
        DriverSpec("ABS_Z", -0.1)
    with pytest.raises(ValueError):
        DriverSpec("QUADRATIC_Z", 0.1)


def test_negated():
    driver = DriverSpec("ABS_Z", 0.3, lam=0.1).negated()
    assert driver.form is DriverForm.NEG_ABS_Z
    assert driver.lam == -0.1
    linear = DriverSpec("LINEAR_Z", 0.3).negated()
    assert linear.kappa == -0.3


def test_from_dict():
    driver = DriverSpec.from_dict({"form": "abs_z", "kappa": 0.2, "lambda": 0.1})
    assert driver == DriverSpec("ABS_Z", 0.2, lam=0.1)
    again = DriverSpec.from_dict(driver.to_dict())
    assert again == DriverSpec("ABS_Z", 0.2, lam=0.1, lipschitz=0.2)
    with pytest.raises(ParameterError):
        DriverSpec.from_dict({"form": "ABS_Z", "gamma": 1})
    with pytest.raises(ParameterError):
        DriverSpec.from_dict({"form": "CUBIC"})
