"""Obstacle problem commands: solve, verify and falsify."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import numpy as np
from traitlets import Integer

from nlrepr.representation import Family
from nlrepr.skorokhod import (
    ObstacleSolution,
    ObstacleSolver,
    Verdict,
    increase_points,
    orientation_of,
)
from nlrepr.tree import NEG_INF, AdaptedProcess
from nlrepr.utils.exceptions import DocumentError, EnumerationGuardError
from nlrepr.utils.io import process_frame

from .base import Task, check


def _report_checks(report):
    return [
        check(c.name, c.max_violation, 0.0, passed=c.passed) | {"node": c.node}
        for c in report.checks
    ]


class SkorokhodSolveTask(Task):
    """Solve for (Y, eta) and check the obstacle conditions."""

    command = "skorokhod solve"

    def emit(self, tree, solution, resources):
        self.add_table(resources, "Y", process_frame(tree, solution.Y.values))
        self.add_table(resources, "eta", process_frame(tree, solution.eta.values))

    def run(self, document, resources):
        op, X = document.operator, document.X
        solver = ObstacleSolver(parent=self)
        solution = solver.solve(op, X, document.f)
        self.emit(op.tree, solution, resources)
        report = solver.verify(op, solution, X)
        return {
            "operator": op.spec.to_dict(),
            "f": solution.f.to_dict(),
            "orientation": solution.orientation.value,
            "increase_points": int(increase_points(solution.eta).sum()),
            "checks": _report_checks(report),
        }


class SkorokhodVerifyTask(SkorokhodSolveTask):
    """Verify a given (Y, eta), or a fresh solution, and link it to stopping."""

    command = "skorokhod verify"

    def run(self, document, resources):
        op, X, f = document.operator, document.X, document.f
        tree = op.tree
        solver = ObstacleSolver(parent=self)
        if "Y" in document.data or "eta" in document.data:
            if "Y" not in document.data or "eta" not in document.data:
                msg = "verifying a given solution needs both Y and eta"
                raise DocumentError(msg)
            eta = document.process(document.data["eta"], "eta").values.copy()
            eta[tree.leaves] = NEG_INF
            solution = ObstacleSolution(
                document.process(document.data["Y"], "Y"),
                AdaptedProcess(tree, eta),
                orientation_of(f),
                f,
            )
        else:
            solution = solver.solve(op, X, f)
        self.emit(tree, solution, resources)
        report = solver.verify(op, solution, X)
        checks = _report_checks(report)
        body = {
            "operator": op.spec.to_dict(),
            "f": f.to_dict(),
            "orientation": solution.orientation.value,
        }
        if f.family is Family.IDENTITY:
            try:
                link = solver.stopping_link(op, X, solution)
            except EnumerationGuardError as e:
                self.log.warning("Skipping the stopping link: %s", e)
                body["stopping_link"] = {"skipped": str(e)}
            else:
                body["stopping_link"] = link
                checks.append(check("stopping_link", 0, 0, passed=link["passed"]))
        body["checks"] = checks
        return body


class SkorokhodFalsifyTask(Task):
    """Every nondecreasing alternative to eta must break the obstacle system.

    Alternatives come from the document's ``zeta`` entry: a process, a
    ``{"shift": c}`` of eta, or ``{"random": {"count": n, "scale": s}}``
    nondecreasing perturbations of eta.
    """

    command = "skorokhod falsify"

    count = Integer(50, help="Random alternatives when zeta asks for random ones.").tag(
        config=True
    )

    def _random_alternatives(self, tree, eta, spec, rng):
        count = int(spec.get("count", self.count))
        scale = float(spec.get("scale", 1.0))
        out = []
        for _ in range(count):
            step = np.abs(rng.normal(scale=scale, size=tree.n_nodes))
            shift = np.zeros(tree.n_nodes)
            shift[0] = rng.normal(scale=scale)
            for t in range(1, tree.horizon):
                level = tree.nodes_at(t)
                shift[level] = shift[tree.parent[level]] + step[level]
            out.append(eta + shift)
        return out

    def alternatives(self, document, solution) -> list:
        tree = document.tree
        eta = np.where(tree.time < tree.horizon, solution.eta.values, 0.0)
        zeta = document.zeta
        if zeta is None:
            zeta = {"random": {}}
        if isinstance(zeta, dict) and "shift" in zeta:
            return [eta + float(zeta["shift"])]
        if isinstance(zeta, dict) and "random" in zeta:
            return self._random_alternatives(tree, eta, zeta["random"] or {}, document.rng)
        if isinstance(zeta, list) and zeta and isinstance(zeta[0], (list, dict)):
            return [document.process(z, "zeta").values for z in zeta]
        return [document.process(zeta, "zeta").values]

    def run(self, document, resources):
        op, X = document.operator, document.X
        solver = ObstacleSolver(parent=self)
        solution = solver.solve(op, X, document.f)
        results = [
            solver.falsify(op, X, zeta, solution) for zeta in self.alternatives(document, solution)
        ]
        verdicts = [r.to_dict() for r in results]
        unresolved = sum(r.verdict is Verdict.UNRESOLVED for r in results)
        return {
            "operator": op.spec.to_dict(),
            "f": solution.f.to_dict(),
            "alternatives": verdicts,
            "witnesses": sum(r.verdict is Verdict.WITNESS for r in results),
            "checks": [check("unresolved", unresolved, 0)],
        }
