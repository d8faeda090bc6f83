"""Randomized checks of the conditional-expectation axioms."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from traitlets.log import get_logger

from .operator import NonlinearExpectation


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    REPORTED = "REPORTED"
    TRIVIAL = "TRIVIAL"


@dataclass
class AxiomCheck:
    name: str
    status: Status
    trials: int = 0
    max_violation: float = 0.0
    note: str = ""
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status.value,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "note": self.note,
            "witness": self.witness,
        }


@dataclass
class AxiomReport:
    variant: str
    entries: list[AxiomCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.status is not Status.FAIL for e in self.entries)

    def __getitem__(self, name) -> AxiomCheck:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "passed": self.passed,
            "entries": [e.to_dict() for e in self.entries],
        }


def _condexp(op, t, xi, horizon=None):
    return op.condexp(t, xi, horizon=horizon, allow_uncertified=True)


def _subtree_gap(tree, t, strict_leaves):
    """Time-``t`` nodes whose subtree contains a leaf with a strict gap."""
    local = tree.ancestors[strict_leaves, t] - tree.level_start[t]
    return np.bincount(local, minlength=tree.width(t)) > 0


def check_monotonicity(op, rng, trials, tol):
    """Pointwise larger terminal values give larger, and strictly larger where seen, values."""
    tree = op.tree
    worst, witness = 0.0, None
    for trial in range(trials):
        xi = rng.normal(size=tree.n_leaves)
        bump = np.zeros(tree.n_leaves)
        if trial % 2:
            chosen = rng.random(tree.n_leaves) < 0.5
            chosen[rng.integers(tree.n_leaves)] = True
        else:
            chosen = np.zeros(tree.n_leaves, dtype=bool)
            chosen[rng.integers(tree.n_leaves)] = True
        bump[chosen] = rng.uniform(0.1, 1.0, size=int(chosen.sum()))
        eta = xi + bump
        strict_leaves = np.flatnonzero(chosen)
        for t in range(tree.horizon + 1):
            diff = _condexp(op, t, eta) - _condexp(op, t, xi)
            seen = _subtree_gap(tree, t, strict_leaves)
            # weak order everywhere, strict order above every strict gap
            bad = np.flatnonzero(np.where(seen, diff <= 0, diff < -tol))
            worst = max(worst, float(np.max(-diff, initial=0.0)))
            if bad.size and witness is None:
                node = int(tree.level_start[t] + bad[0])
                witness = {
                    "trial": trial,
                    "time": t,
                    "node": tree.labels[node],
                    "bumped_leaves": [tree.labels[tree.leaves.start + i] for i in strict_leaves],
                    "lower": float(_condexp(op, t, xi)[bad[0]]),
                    "upper": float(_condexp(op, t, eta)[bad[0]]),
                }
    status = Status.FAIL if witness else Status.PASS
    return AxiomCheck("strict_monotonicity", status, trials, worst, witness=witness)


def check_locality(op, rng, trials, tol):
    """Mixing two variables along a time-``t`` event mixes their expectations."""
    tree = op.tree
    worst, witness = 0.0, None
    for trial in range(trials):
        t = int(rng.integers(tree.horizon + 1))
        xi, eta = rng.normal(size=(2, tree.n_leaves))
        on_a = rng.random(tree.width(t)) < 0.5
        mixed = np.where(tree.lift(on_a, t), xi, eta)
        expected = np.where(on_a, _condexp(op, t, xi), _condexp(op, t, eta))
        err = float(np.max(np.abs(_condexp(op, t, mixed) - expected)))
        worst = max(worst, err)
        if err > tol and witness is None:
            witness = {"trial": trial, "time": t, "error": err}
    status = Status.FAIL if witness else Status.PASS
    return AxiomCheck("zero_one_law", status, trials, worst, witness=witness)


def check_translation(op, rng, trials, tol):
    """``E_t[xi + c] = E_t[xi] + c`` for known ``c``."""
    tree = op.tree
    if not op.spec.translation_invariant:
        return AxiomCheck(
            "translation_invariance",
            Status.NOT_APPLICABLE,
            note=f"not claimed for {op.spec.variant.value}",
        )
    worst, witness = 0.0, None
    for trial in range(trials):
        t = int(rng.integers(tree.horizon + 1))
        xi = rng.normal(size=tree.n_leaves)
        c = rng.normal(size=tree.width(t)) * 3
        err = float(np.max(np.abs(_condexp(op, t, xi + tree.lift(c, t)) - _condexp(op, t, xi) - c)))
        worst = max(worst, err)
        if err > tol and witness is None:
            witness = {"trial": trial, "time": t, "error": err}
    status = Status.FAIL if witness else Status.PASS
    return AxiomCheck("translation_invariance", status, trials, worst, witness=witness)


def _tower_error(op, rng, trials):
    tree = op.tree
    worst, worst_trial = 0.0, None
    for trial in range(trials):
        s, t = sorted(int(x) for x in rng.integers(tree.horizon + 1, size=2))
        xi = rng.normal(size=tree.n_leaves)
        inner = _condexp(op, t, xi)
        err = float(np.max(np.abs(_condexp(op, s, inner, horizon=t) - _condexp(op, s, xi))))
        if err > worst:
            worst, worst_trial = err, {"trial": trial, "s": s, "t": t, "error": err}
    return worst, worst_trial


def check_tower(op, rng, trials, tol):
    """``E_s[E_t[xi]] = E_s[xi]`` for ``s <= t``."""
    worst, witness = _tower_error(op, rng, trials)
    if not op.tower:
        return AxiomCheck(
            "tower",
            Status.NOT_APPLICABLE,
            trials,
            worst,
            note="not applicable / may fail: the operator is not time consistent",
            witness=witness if worst > tol else None,
        )
    status = Status.FAIL if worst > tol else Status.PASS
    return AxiomCheck("tower", status, trials, worst, witness=witness if worst > tol else None)


def check_constants(op, rng, trials, tol):
    """Constants are preserved (reported only for the (y, z) variant)."""
    tree = op.tree
    worst = 0.0
    for _ in range(trials):
        c = float(rng.normal() * 5)
        for t in range(tree.horizon + 1):
            values = _condexp(op, t, np.full(tree.n_leaves, c))
            worst = max(worst, float(np.max(np.abs(values - c))))
    if not op.spec.constant_preserving:
        return AxiomCheck(
            "constant_preservation",
            Status.REPORTED,
            trials,
            worst,
            note="a y-dependent driver need not preserve constants",
        )
    status = Status.FAIL if worst > 1e-12 else Status.PASS
    return AxiomCheck("constant_preservation", status, trials, worst)


def axiom_suite(op: NonlinearExpectation, trials: int = 100, seed: int = 0, tol: float = 1e-10):
    """Run every randomized axiom check and collect a report.

    Failures are report entries, never exceptions. Monotone convergence is
    structurally trivial on a finite space and reported as such.
    """
    rng = np.random.default_rng(seed)
    log = get_logger()
    log.info("Checking %s axioms with %i trials", op.spec.variant.value, trials)
    report = AxiomReport(op.spec.variant.value)
    checks = (check_monotonicity, check_locality, check_translation, check_tower, check_constants)
    for check in checks:
        entry = check(op, rng, trials, tol)
        log.debug(
            "%s: %s (max violation %.3g)", entry.name, entry.status.value, entry.max_violation
        )
        report.entries.append(entry)
    report.entries.append(
        AxiomCheck(
            "monotone_convergence",
            Status.TRIVIAL,
            note="finite space: pointwise limits pass through the continuous operator",
        )
    )
    return report
