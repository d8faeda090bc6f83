"""Randomized axiom checks from the command line."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from traitlets import Float, Integer

from nlrepr.expectation import Status, axiom_suite

from .base import Task


class AxiomsCheckTask(Task):
    """Check monotonicity, locality, translation, tower and constants."""

    command = "axioms check"

    trials = Integer(
        None,
        allow_none=True,
        help="Random trials per axiom; defaults to the document's trials entry (else 100).",
    ).tag(config=True)

    tol_axiom = Float(1e-10, help="Largest violation accepted by an axiom check.").tag(
        config=True
    )

    def run(self, document, resources):
        op = document.operator
        trials = document.trials if self.trials is None else self.trials
        report = axiom_suite(op, trials=trials, seed=document.seed, tol=self.tol_axiom)
        checks = [
            {
                "name": entry.name,
                "passed": entry.status is not Status.FAIL,
                "value": entry.max_violation,
                "limit": self.tol_axiom,
            }
            for entry in report.entries
        ]
        return {
            "operator": op.spec.to_dict(),
            "certificate": None if op.certificate is None else op.certificate.to_dict(),
            "trials": trials,
            "axioms": report.to_dict()["entries"],
            "checks": checks,
        }
