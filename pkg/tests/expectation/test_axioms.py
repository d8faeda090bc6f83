"""Tests for the randomized axiom suite"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from nlrepr.expectation import (
    DriverSpec,
    NonlinearExpectation,
    OperatorSpec,
    Status,
    Variant,
    axiom_suite,
)
from nlrepr.tree import build_binomial

from ..base import TestsBase, linear, yz_driver, z_driver

NAMES = [
    "strict_monotonicity",
    "zero_one_law",
    "translation_invariance",
    "tower",
    "constant_preservation",
    "monotone_convergence",
]


class TestAxiomSuite(TestsBase):
    def test_linear(self):
        report = axiom_suite(linear(self.binomial(3)), trials=20)
        assert [e.name for e in report.entries] == NAMES
        assert report.passed
        assert report["monotone_convergence"].status is Status.TRIVIAL

    def test_z_driver(self):
        report = axiom_suite(z_driver(self.binomial(3), kappa=0.3), trials=20, seed=7)
        assert report.passed
        assert report["tower"].status is Status.PASS
        assert report["translation_invariance"].status is Status.PASS

    def test_yz_driver(self):
        report = axiom_suite(yz_driver(self.binomial(2)), trials=10)
        assert report.passed
        assert report["translation_invariance"].status is Status.NOT_APPLICABLE
        entry = report["constant_preservation"]
        assert entry.status is Status.REPORTED
        assert entry.max_violation > 0

    def test_alpha_maxmin(self):
        spec = OperatorSpec(Variant.ALPHA_MAXMIN, DriverSpec("ABS_Z", 0.3), alpha=0.5)
        report = axiom_suite(NonlinearExpectation(spec, self.binomial(3)), trials=20)
        assert report["tower"].status is Status.NOT_APPLICABLE
        assert report["strict_monotonicity"].status is Status.PASS
        assert report.passed

    def test_deterministic(self):
        op = z_driver(self.binomial(2))
        first = axiom_suite(op, trials=5, seed=11).to_dict()
        assert first == axiom_suite(op, trials=5, seed=11).to_dict()

    def test_uncertified_monotonicity_fails(self):
        spec = OperatorSpec(Variant.Z_DRIVER, DriverSpec("ABS_Z", 3.0))
        op = NonlinearExpectation(spec, self.binomial(1), validate=False)
        report = axiom_suite(op, trials=20)
        entry = report["strict_monotonicity"]
        assert entry.status is Status.FAIL
        assert entry.witness is not None
        assert not report.passed


def test_many_trials():
    tree = build_binomial(3)
    alpha = OperatorSpec(Variant.ALPHA_MAXMIN, DriverSpec("ABS_Z", 0.2), alpha=0.4)
    for op in (linear(tree), z_driver(tree), yz_driver(tree), NonlinearExpectation(alpha, tree)):
        report = axiom_suite(op, trials=500, seed=3)
        assert report.passed, report.to_dict()
        assert report["strict_monotonicity"].trials == 500
        assert report["zero_one_law"].max_violation <= 1e-10
