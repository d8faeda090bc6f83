"""Optimal stopping commands."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from nlrepr.stopping import StoppingSolver, check_criterion, snell
from nlrepr.utils.io import process_frame

from .base import Task, check


def _summary(op, solution, U, tau_snell):
    return {
        "operator": op.spec.to_dict(),
        "value": solution.value,
        "value_lower": solution.value_lower,
        "tau_lower": solution.tau_lower.describe(),
        "tau_upper": solution.tau_upper.describe(),
        "snell_value": float(U[0]),
        "snell_tau": tau_snell.describe(),
        "residual": solution.representation.residual,
    }


class StopSolveTask(Task):
    """Optimal value and the level-crossing rules of L at 0."""

    command = "stop solve"

    def run(self, document, resources):
        op, X = document.operator, document.X
        solution = StoppingSolver(parent=self).solve(op, X)
        U, tau_snell = snell(op, X)
        tree = op.tree
        self.add_table(resources, "L", process_frame(tree, solution.L.values))
        self.add_table(resources, "U", process_frame(tree, U.values))
        tol = self.tol_check
        return {
            **_summary(op, solution, U, tau_snell),
            "checks": [
                check("residual", solution.representation.residual, self.tol_residual),
                check("snell_agreement", abs(solution.value - U[0]), tol),
                check("lower_agreement", abs(solution.value_lower - U[0]), tol),
            ],
        }


class StopVerifyTask(Task):
    """Cross-check the level-crossing solution against rule enumeration."""

    command = "stop verify"

    def run(self, document, resources):
        op, X = document.operator, document.X
        solver = StoppingSolver(parent=self)
        solution = solver.solve(op, X)
        U, tau_snell = snell(op, X)
        brute = solver.brute_force_value(op, X)
        table = solver.criterion_table(op, X, solution)
        self.add_table(resources, "criterion_table", table)
        tree = op.tree
        self.add_table(resources, "L", process_frame(tree, solution.L.values))
        self.add_table(resources, "U", process_frame(tree, U.values))

        tol = self.tol_check
        passing = table[table["criterion"]]
        suboptimal = passing[~passing["optimal"]]
        unflagged = table[table["optimal"] & ~table["criterion"]]
        envelope = max(float(table["value"].max()) - float(U[0]), 0.0)
        dominated = max(float((X.values - U.values).max()), 0.0)
        upper = check_criterion(solution.L, solution.tau_upper)
        return {
            **_summary(op, solution, U, tau_snell),
            "brute_force_value": brute.value,
            "brute_force_argmax": [rule.describe() for rule in brute.argmax],
            "criterion_table": {
                "n_rules": len(table),
                "n_criterion": len(passing),
                "n_optimal": int(table["optimal"].sum()),
                "optimal_without_criterion": list(unflagged["rule"]),
            },
            "checks": [
                check("residual", solution.representation.residual, self.tol_residual),
                check("brute_force_agreement", abs(solution.value - brute.value), tol),
                check("snell_agreement", abs(solution.value - U[0]), tol),
                check("lower_agreement", abs(solution.value_lower - brute.value), tol),
                check("criterion_sufficient", len(suboptimal), 0),
                check("tau_upper_criterion", len(upper.failing_paths(tree)), 0),
                check("envelope", envelope, tol),
                check("envelope_dominates", dominated, tol),
            ],
        }
