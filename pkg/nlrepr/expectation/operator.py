"""Non-linear conditional expectations on event trees.

Tower variants are exact one-step backward recursions

    y = sum_c p_c y_c + g(t, y, z) * dt,    z_j = sum_c w_cj y_c,

where ``w`` are the least-squares weights expressing the martingale
integrand from the child values. The alpha-maxmin variant mixes the
``g`` and ``-g`` expectations with a per-node weight and is not a tower
operator.
"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from traitlets.log import get_logger

from nlrepr.tree import TreeTopology, as_array
from nlrepr.utils.exceptions import (
    ConditionViolated,
    FixedPointError,
    NonTowerOperatorError,
    ParameterError,
    UncertifiedOperatorError,
)

from .drivers import DriverForm, DriverSpec

#: Smallest certified monotonicity margin.
MIN_MARGIN = 1e-9

#: Largest K * dt accepted for the implicit (y, z) step.
MAX_CONTRACTION = 0.5

MAX_PICARD = 200
PICARD_TOL = 1e-14


class Variant(str, enum.Enum):
    LINEAR = "LINEAR"
    Z_DRIVER = "Z_DRIVER"
    YZ_DRIVER = "YZ_DRIVER"
    ALPHA_MAXMIN = "ALPHA_MAXMIN"


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    """A family of conditional expectations.

    ``alpha`` (ALPHA_MAXMIN only) is a constant or a per-node array in
    [0, 1]; ``alt_driver`` defaults to the negated ``driver``.
    """

    variant: Variant = Variant.LINEAR
    driver: DriverSpec = DriverSpec()
    alpha: object = None
    alt_driver: DriverSpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.variant is Variant.LINEAR and self.driver.form is not DriverForm.ZERO:
            msg = "the LINEAR variant takes no driver"
            raise ParameterError(msg)
        if self.variant is Variant.Z_DRIVER and self.driver.has_y_term:
            msg = "a y-term needs the YZ_DRIVER variant"
            raise ParameterError(msg)
        if self.variant is Variant.ALPHA_MAXMIN:
            if self.alpha is None:
                msg = "ALPHA_MAXMIN needs alpha"
                raise ParameterError(msg)
            alpha = np.asarray(getattr(self.alpha, "values", self.alpha), dtype=float)
            if not ((alpha >= 0) & (alpha <= 1)).all():
                msg = "alpha must take values in [0, 1]"
                raise ParameterError(msg)
            if self.alt_driver is None:
                object.__setattr__(self, "alt_driver", self.driver.negated())

    @property
    def tower(self) -> bool:
        return self.variant is not Variant.ALPHA_MAXMIN

    @property
    def translation_invariant(self) -> bool:
        """True for the operators that commute with adding known quantities."""
        return self.variant in (Variant.LINEAR, Variant.Z_DRIVER)

    @property
    def constant_preserving(self) -> bool:
        return self.variant is not Variant.YZ_DRIVER

    def constituents(self) -> list[OperatorSpec]:
        """The tower operators an alpha-maxmin operator mixes."""
        if self.variant is not Variant.ALPHA_MAXMIN:
            return [self]
        out = []
        for driver in (self.driver, self.alt_driver):
            variant = Variant.YZ_DRIVER if driver.has_y_term else Variant.Z_DRIVER
            out.append(OperatorSpec(variant, driver))
        return out

    def to_dict(self) -> dict:
        data = {"variant": self.variant.value, "tower": self.tower}
        if self.variant is not Variant.LINEAR:
            data["driver"] = self.driver.to_dict()
        if self.variant is Variant.ALPHA_MAXMIN:
            alpha = np.asarray(getattr(self.alpha, "values", self.alpha), dtype=float)
            data["alpha"] = float(alpha) if alpha.ndim == 0 else alpha.tolist()
            data["alt_driver"] = self.alt_driver.to_dict()
        return data

    @classmethod
    def from_dict(cls, data) -> OperatorSpec:
        data = dict(data or {})
        unknown = set(data) - {"variant", "driver", "alpha", "alt_driver", "validate", "tower"}
        if unknown:
            msg = f"unknown operator fields {sorted(unknown)}"
            raise ParameterError(msg)
        try:
            variant = Variant(str(data.get("variant", "LINEAR")).upper())
        except ValueError:
            msg = f"unknown operator variant {data.get('variant')!r}"
            raise ParameterError(msg) from None
        alt = data.get("alt_driver")
        return cls(
            variant,
            DriverSpec.from_dict(data.get("driver")),
            alpha=data.get("alpha"),
            alt_driver=None if alt is None else DriverSpec.from_dict(alt),
        )


@dataclass(frozen=True)
class Certificate:
    """Outcome of :func:`validate_operator`."""

    variant: Variant
    min_margin: float
    node: str
    max_contraction: float

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "min_margin": self.min_margin,
            "node": self.node,
            "max_contraction": self.max_contraction,
        }


def _margins(spec: OperatorSpec, tree: TreeTopology):
    """Smallest ``p_c - K dt sum_j |w_cj|`` and where it occurs."""
    K = 0.0 if spec.variant is Variant.LINEAR else spec.driver.K
    best, where = np.inf, 0
    for t in range(tree.horizon):
        p = tree.kid_prob[t]
        spread = np.abs(tree.weights[t]).sum(axis=1)
        margin = np.where(p > 0, p - K * tree.dt[t] * spread, np.inf)
        row = int(np.argmin(margin.min(axis=1)))
        if margin[row].min() < best:
            best, where = float(margin[row].min()), int(tree.level_start[t] + row)
    return best, where, K


def validate_operator(spec: OperatorSpec, tree: TreeTopology) -> Certificate:
    """Certify strict monotonicity (and contraction for the (y, z) variant).

    Raises :class:`ConditionViolated` naming the offending node and margin.
    """
    if spec.variant is Variant.ALPHA_MAXMIN:
        alpha = np.asarray(getattr(spec.alpha, "values", spec.alpha), dtype=float)
        if alpha.ndim and alpha.shape != (tree.n_nodes,):
            msg = f"alpha needs one value per node ({tree.n_nodes}), got {alpha.shape}"
            raise ParameterError(msg)
        parts = [validate_operator(part, tree) for part in spec.constituents()]
        worst = min(parts, key=lambda c: c.min_margin)
        return Certificate(
            spec.variant, worst.min_margin, worst.node, max(c.max_contraction for c in parts)
        )

    margin, node, K = _margins(spec, tree)
    if margin < MIN_MARGIN:
        raise ConditionViolated(tree.labels[node], margin)
    contraction = float(K * tree.dt.max()) if spec.variant is Variant.YZ_DRIVER else 0.0
    if contraction > MAX_CONTRACTION:
        t = int(np.argmax(tree.dt))
        raise ConditionViolated(
            tree.labels[tree.level_start[t]],
            MAX_CONTRACTION - contraction,
            reason="K * dt above 0.5 for the implicit step",
        )
    return Certificate(spec.variant, margin, tree.labels[node], contraction)


#: Placeholder certificate for the constituents of an unchecked mixture.
_PROBE = Certificate(Variant.LINEAR, float("nan"), "", 0.0)


class NonlinearExpectation:
    """An operator family bound to a tree.

    Construction certifies the operator; ``validate=False`` skips the
    certificate (for probing uncertified drivers), in which case the
    solvers built on top refuse the operator.
    """

    def __init__(
        self,
        spec: OperatorSpec,
        tree: TreeTopology,
        validate: bool = True,
        certificate: Certificate | None = None,
    ):
        self.spec = spec
        self.tree = tree
        self.log = get_logger()
        self.certificate: Certificate | None = certificate
        if certificate is None and validate:
            self.certificate = validate_operator(spec, tree)
        elif certificate is None:
            self.log.warning("Operator %s used without a certificate", spec.variant.value)
        self._parts: list[NonlinearExpectation] = []
        if spec.variant is Variant.ALPHA_MAXMIN:
            # constituents share the mixed operator's certificate (or lack of one)
            self._parts = [
                NonlinearExpectation(p, tree, certificate=self.certificate or _PROBE)
                for p in spec.constituents()
            ]
            alpha = np.asarray(getattr(spec.alpha, "values", spec.alpha), dtype=float)
            self._alpha = np.broadcast_to(alpha, (tree.n_nodes,))

    @property
    def certified(self) -> bool:
        return self.certificate is not None

    @property
    def tower(self) -> bool:
        return self.spec.tower

    def require(self, tower: bool = False, translation_invariant: bool = False):
        """Refuse operators lacking the certificate or a structural property."""
        if not self.certified:
            msg = f"operator {self.spec.variant.value} has no certificate"
            raise UncertifiedOperatorError(msg)
        if tower and not self.tower:
            msg = f"operator {self.spec.variant.value} lacks the tower property"
            raise NonTowerOperatorError(msg)
        if translation_invariant and not self.spec.translation_invariant:
            msg = f"operator {self.spec.variant.value} is not translation invariant"
            raise NonTowerOperatorError(msg)

    # ------------------------------------------------------------------
    # One step
    # ------------------------------------------------------------------

    def _combine(self, mean, z, dt):
        spec = self.spec
        if spec.variant is Variant.LINEAR:
            return mean
        hz = spec.driver.h(z)
        if spec.variant is Variant.Z_DRIVER:
            return mean + hz * dt
        lam = spec.driver.lam
        y = mean + hz * dt
        for _ in range(MAX_PICARD):
            nxt = mean + (lam * y + hz) * dt
            tol = np.maximum(PICARD_TOL, 4 * np.finfo(float).eps * np.abs(nxt))
            if (np.abs(nxt - y) <= tol).all():
                return nxt
            y = nxt
        msg = f"implicit step did not converge in {MAX_PICARD} iterations"
        raise FixedPointError(msg)

    def step(self, t: int, upper) -> np.ndarray:
        """Map values at the time-``t+1`` nodes to the time-``t`` nodes.

        ``upper`` may carry leading batch axes.
        """
        if not self.tower:
            msg = "alpha-maxmin expectations have no one-step recursion"
            raise NonTowerOperatorError(msg)
        tree = self.tree
        values = np.asarray(upper, dtype=float)[..., tree.kids[t]]
        mean = (values * tree.kid_prob[t]).sum(axis=-1)
        if self.spec.variant is Variant.LINEAR:
            return mean
        z = np.einsum("nib,...nb->...ni", tree.weights[t], values)
        return self._combine(mean, z, tree.dt[t])

    def one_step(self, node: int, child_values) -> float:
        """Expectation at ``node`` of the values at its children."""
        tree = self.tree
        t = int(tree.time[node])
        if t >= tree.horizon:
            msg = "leaves have no children"
            raise ParameterError(msg)
        child_values = np.asarray(child_values, dtype=float)
        if child_values.shape != (tree.n_children[node],):
            msg = f"node {tree.labels[node]!r} has {tree.n_children[node]} children"
            raise ParameterError(msg)
        upper = np.zeros(tree.width(t + 1))
        first = tree.child_start[node] - tree.level_start[t + 1]
        upper[first : first + child_values.size] = child_values
        return float(self.step(t, upper)[node - tree.level_start[t]])

    # ------------------------------------------------------------------
    # Conditional expectations
    # ------------------------------------------------------------------

    def backward(self, xi, t: int = 0, horizon: int | None = None) -> dict[int, np.ndarray]:
        """Values of ``E_{u,horizon}[xi]`` at every time ``u`` in ``t..horizon``."""
        horizon = self.tree.horizon if horizon is None else horizon
        values = as_array(xi, size=self.tree.width(horizon))
        levels = {horizon: values}
        for u in range(horizon - 1, t - 1, -1):
            values = self.step(u, values)
            levels[u] = values
        return levels

    def condexp(self, t: int, xi, horizon: int | None = None, allow_uncertified: bool = False):
        """``E_{t,horizon}[xi]`` at every time-``t`` node.

        ``xi`` lives on the time-``horizon`` nodes (the leaves by default) and
        may carry leading batch axes.
        """
        if not (allow_uncertified or self.certified):
            msg = f"operator {self.spec.variant.value} has no certificate"
            raise UncertifiedOperatorError(msg)
        horizon = self.tree.horizon if horizon is None else horizon
        if not 0 <= t <= horizon <= self.tree.horizon:
            msg = f"need 0 <= t <= horizon <= {self.tree.horizon}, got t={t}, horizon={horizon}"
            raise ParameterError(msg)
        if self.spec.variant is Variant.ALPHA_MAXMIN:
            upper, lower = (part.backward(xi, t, horizon)[t] for part in self._parts)
            alpha = self._alpha[self.tree.level(t)]
            return alpha * upper + (1 - alpha) * lower
        return self.backward(xi, t, horizon)[t]

    def evaluate_stopped(self, payoff, stop_mask, never_value=0.0, t: int = 0):
        """Stopped evaluation ``E_{t,tau}`` of a reward.

        The value is frozen at ``payoff`` on STOP nodes (``stop_mask``) and
        propagated by the one-step recursion elsewhere; unstopped paths
        receive ``never_value`` at their leaf. ``stop_mask`` may carry leading
        batch axes (one rule per row).
        """
        tree = self.tree
        payoff = np.asarray(getattr(payoff, "values", payoff), dtype=float)
        stop_mask = np.asarray(stop_mask, dtype=bool)
        leaves = tree.leaves
        values = np.where(stop_mask[..., leaves], payoff[..., leaves], never_value)
        for u in range(tree.horizon - 1, t - 1, -1):
            level = tree.level(u)
            values = np.where(stop_mask[..., level], payoff[..., level], self.step(u, values))
        return values


def one_step(op: NonlinearExpectation, node: int, child_values) -> float:
    """Module-level form of :meth:`NonlinearExpectation.one_step`."""
    if not op.certified:
        msg = f"operator {op.spec.variant.value} has no certificate"
        raise UncertifiedOperatorError(msg)
    return op.one_step(node, child_values)


def condexp(op: NonlinearExpectation, t: int, xi) -> np.ndarray:
    """Module-level form of :meth:`NonlinearExpectation.condexp`."""
    return op.condexp(t, xi)
