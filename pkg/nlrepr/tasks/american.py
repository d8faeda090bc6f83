"""American put commands: exercise signal and strike sweep."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from traitlets import Float, Unicode

from nlrepr.american import AmericanPut, sweep_long
from nlrepr.expectation import Variant
from nlrepr.utils.io import process_frame

from .base import Task, check
from .document import parse_strikes


def _market_dict(market):
    data = {"rate": market.rate}
    if market.crr is not None:
        data["crr"] = market.crr.to_dict()
    return data


class AmputBoundaryTask(Task):
    """Solve the strike-independent exercise signal K."""

    command = "amput boundary"

    def run(self, document, resources):
        op, market = document.operator, document.market
        put = AmericanPut(parent=self)
        K = put.solve_boundary(op, market)
        residual = put.boundary_residual(op, market, K)
        excess = K.values - market.prices.values
        frame = process_frame(market.tree, K.values).rename(columns={"value": "K"})
        frame["P"] = market.prices.values
        self.add_table(resources, "K", frame)
        return {
            "operator": op.spec.to_dict(),
            "market": _market_dict(market),
            "residual": residual,
            "min_excess": float(excess.min()),
            "checks": [
                check("residual", residual, self.tol_residual),
                check("dominance", max(-float(excess.min()), 0.0), self.tol_check),
            ],
        }


class AmputSweepTask(Task):
    """Price puts over a strike grid from one exercise signal."""

    command = "amput sweep"

    strikes = Unicode(
        "", help="Strike grid: comma separated values or a:b:n (overrides the document)."
    ).tag(config=True)

    tol_gap = Float(1e-8, help="Largest gap accepted between put value and Snell value.").tag(
        config=True
    )

    tol_classical = Float(
        1e-10, help="Largest gap accepted against the classical binomial put value."
    ).tag(config=True)

    def strike_grid(self, document):
        if not self.strikes:
            return document.strikes
        if ":" in self.strikes:
            return parse_strikes(self.strikes)
        return parse_strikes([float(k) for k in self.strikes.split(",")])

    def run(self, document, resources):
        op, market = document.operator, document.market
        put = AmericanPut(parent=self)
        K = put.solve_boundary(op, market)
        frame = put.sweep(op, market, self.strike_grid(document), K)
        self.add_table(resources, "sweep", frame)
        self.add_table(resources, "sweep_long", sweep_long(frame))

        checks = [
            check("dominance", 0, 0, passed=bool(frame["dominance"].all())),
            check(
                "signal_below_strike",
                int((~frame["signal_below_strike"]).sum()),
                0,
            ),
        ]
        if op.spec.translation_invariant:
            rows = frame[frame["criterion_upper"]]
            worst = float(rows["gap"].max()) if len(rows) else 0.0
            checks.append(check("gap", worst, self.tol_gap))
        if op.spec.variant is Variant.LINEAR and market.crr is not None:
            classical = float((frame["value"] - frame["classical"]).abs().max())
            checks.append(check("classical", classical, self.tol_classical))
        return {
            "operator": op.spec.to_dict(),
            "market": _market_dict(market),
            "n_strikes": len(frame),
            "max_gap": float(frame["gap"].max()),
            "checks": checks,
        }
