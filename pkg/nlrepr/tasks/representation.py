"""Representation commands: solve, verify and characterize."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import numpy as np
import pandas as pd
from traitlets import Integer, List

from nlrepr.representation import RepresentationProblem, RepresentationSolver
from nlrepr.utils.io import process_frame

from .base import Task, check


def _problem(document):
    return RepresentationProblem(document.X, document.f, document.operator, document.variant)


def _header(problem):
    op = problem.operator
    return {
        "variant": problem.variant.value,
        "f": problem.f.to_dict(),
        "operator": op.spec.to_dict(),
        "certificate": None if op.certificate is None else op.certificate.to_dict(),
    }


class ReprSolveTask(Task):
    """Solve the representation problem by backward induction."""

    command = "repr solve"

    def run(self, document, resources):
        problem = _problem(document)
        result = RepresentationSolver(parent=self).solve(problem)
        self.add_table(resources, "L", process_frame(problem.tree, result.L.values))
        return {
            **_header(problem),
            "residual": result.residual,
            "max_phi": result.max_phi,
            "iterations": int(result.iterations.sum()),
            "per_node_brackets": result.brackets(),
            "checks": [check("residual", result.residual, self.tol_residual)],
        }


class ReprVerifyTask(Task):
    """Residual of a given (or freshly solved) L plus a uniqueness probe.

    The probe moves L at sampled nodes by each of ``deltas`` and requires
    the residual to grow by at least ``1e-4 * delta * (min slope of f)``.
    """

    command = "repr verify"

    probe_nodes = Integer(64, help="Nodes perturbed by the uniqueness probe.").tag(config=True)
    deltas = List([1e-3, 1e-1], help="Perturbation sizes of the uniqueness probe.").tag(
        config=True
    )

    def run(self, document, resources):
        problem = _problem(document)
        tree = problem.tree
        solver = RepresentationSolver(parent=self)
        if "L" in document.data:
            L = document.process(document.data["L"], "L").values.copy()
            if problem.variant.value == "TERMINAL":
                L[tree.leaves] = -np.inf
        else:
            L = solver.solve(problem).L.values.copy()
        by_node = solver.residual_by_node(problem, L)
        frame = process_frame(tree, L).rename(columns={"value": "L"})
        frame["residual"] = by_node
        self.add_table(resources, "residual", frame)

        defined = np.flatnonzero(tree.time <= problem.last_time)
        count = min(self.probe_nodes, defined.size)
        nodes = np.sort(document.rng.choice(defined, size=count, replace=False))
        slope = problem.f.min_slope(tree.horizon)
        worst_ratio = np.inf
        for delta in self.deltas:
            for node in nodes:
                moved = L.copy()
                moved[node] += delta
                ratio = solver.residual(problem, moved) / (delta * slope)
                worst_ratio = min(worst_ratio, ratio)
        residual = float(by_node.max())
        return {
            **_header(problem),
            "residual": residual,
            "probed_nodes": [tree.labels[n] for n in nodes],
            "min_probe_ratio": worst_ratio,
            "checks": [
                check("residual", residual, self.tol_residual),
                check("uniqueness_probe", worst_ratio, 1e-4, passed=worst_ratio >= 1e-4),
            ],
        }


class ReprCharacterizeTask(Task):
    """Compare L at the stopping nodes of sigma with the minimum of l over later rules."""

    command = "repr characterize"

    def run(self, document, resources):
        problem = _problem(document)
        solver = RepresentationSolver(parent=self)
        result = solver.solve(problem)
        report = solver.essinf_characterization(problem, result.L, document.sigma)
        rows = [entry.to_dict() for entry in report.entries]
        for row in rows:
            row["argmin"] = " ".join(row["argmin"])
        self.add_table(resources, "characterization", pd.DataFrame(rows))
        return {
            **_header(problem),
            "residual": result.residual,
            "characterization": report.to_dict(),
            "checks": [
                check("residual", result.residual, self.tol_residual),
                check("characterization", report.max_gap, report.tol_gap, passed=report.passed),
            ],
        }
