"""Drivers g(t, y, z) of one-step g-expectations."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from nlrepr.utils.exceptions import ParameterError


class DriverForm(str, enum.Enum):
    ZERO = "ZERO"
    LINEAR_Z = "LINEAR_Z"
    ABS_Z = "ABS_Z"
    NEG_ABS_Z = "NEG_ABS_Z"
    PIECEWISE_LINEAR_Z = "PIECEWISE_LINEAR_Z"


@dataclass(frozen=True)
class DriverSpec:
    """A Lipschitz driver ``g(t, y, z) = lam * y + sum_j h(z_j)``.

    ``h`` depends on ``form``: ``kappa * z`` (LINEAR_Z), ``kappa * |z|``
    (ABS_Z), ``-kappa * |z|`` (NEG_ABS_Z), or ``kappa * z`` for ``z >= 0``
    and ``kappa_neg * z`` below (PIECEWISE_LINEAR_Z). ``lam`` is only used
    by the (y, z) operator variant.
    """

    form: DriverForm = DriverForm.ZERO
    kappa: float = 0.0
    kappa_neg: float | None = None
    lam: float = 0.0
    lipschitz: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "form", DriverForm(self.form))
        if self.form is DriverForm.ZERO and self.kappa != 0:
            msg = "the ZERO driver takes no kappa"
            raise ParameterError(msg)
        if self.form in (DriverForm.ABS_Z, DriverForm.NEG_ABS_Z) and self.kappa < 0:
            msg = f"{self.form.value} needs kappa >= 0, got {self.kappa!r}"
            raise ParameterError(msg)
        if self.lipschitz is not None and self.lipschitz < self.true_lipschitz:
            msg = (
                f"declared Lipschitz constant {self.lipschitz!r} is below the "
                f"driver's slope {self.true_lipschitz!r}"
            )
            raise ParameterError(msg)
        if not np.isfinite(self.g(0, 0.0, np.zeros(1))):
            msg = "driver is not finite at the origin"
            raise ParameterError(msg)
        if self.g(0, 0.0, np.zeros(1)) != 0.0:
            msg = "driver must vanish at z = 0"
            raise ParameterError(msg)

    @property
    def z_slope(self) -> float:
        """Largest slope of ``h``."""
        if self.form is DriverForm.PIECEWISE_LINEAR_Z:
            neg = self.kappa if self.kappa_neg is None else self.kappa_neg
            return max(abs(self.kappa), abs(neg))
        return abs(self.kappa)

    @property
    def true_lipschitz(self) -> float:
        return max(self.z_slope, abs(self.lam))

    @property
    def K(self) -> float:
        """Lipschitz constant used by certificates: the declared one when given."""
        return self.true_lipschitz if self.lipschitz is None else float(self.lipschitz)

    @property
    def has_y_term(self) -> bool:
        return self.lam != 0

    def h(self, z):
        """z-part of the driver, summed over the last axis of ``z``."""
        z = np.asarray(z, dtype=float)
        if self.form is DriverForm.ZERO:
            out = np.zeros_like(z)
        elif self.form is DriverForm.LINEAR_Z:
            out = self.kappa * z
        elif self.form is DriverForm.ABS_Z:
            out = self.kappa * np.abs(z)
        elif self.form is DriverForm.NEG_ABS_Z:
            out = -self.kappa * np.abs(z)
        else:
            neg = self.kappa if self.kappa_neg is None else self.kappa_neg
            out = np.where(z >= 0, self.kappa * z, neg * z)
        return out.sum(axis=-1)

    def g(self, t, y, z):
        return self.lam * np.asarray(y, dtype=float) + self.h(z)

    def negated(self) -> DriverSpec:
        """The driver ``-g``."""
        form, kappa, kappa_neg = self.form, self.kappa, self.kappa_neg
        if form is DriverForm.ABS_Z:
            form = DriverForm.NEG_ABS_Z
        elif form is DriverForm.NEG_ABS_Z:
            form = DriverForm.ABS_Z
        elif form in (DriverForm.LINEAR_Z, DriverForm.PIECEWISE_LINEAR_Z):
            kappa = -kappa
            kappa_neg = None if kappa_neg is None else -kappa_neg
        return replace(self, form=form, kappa=kappa, kappa_neg=kappa_neg, lam=-self.lam)

    @classmethod
    def from_dict(cls, data) -> DriverSpec:
        data = dict(data or {})
        unknown = set(data) - {"form", "kappa", "kappa_neg", "lambda", "lam", "lipschitz"}
        if unknown:
            msg = f"unknown driver fields {sorted(unknown)}"
            raise ParameterError(msg)
        try:
            form = DriverForm(str(data.get("form", "ZERO")).upper())
        except ValueError:
            msg = f"unknown driver form {data.get('form')!r}"
            raise ParameterError(msg) from None
        lam = data.get("lambda", data.get("lam", 0.0))
        return cls(
            form=form,
            kappa=float(data.get("kappa", 0.0)),
            kappa_neg=None if data.get("kappa_neg") is None else float(data["kappa_neg"]),
            lam=float(lam),
            lipschitz=None if data.get("lipschitz") is None else float(data["lipschitz"]),
        )

    def to_dict(self) -> dict:
        return {
            "form": self.form.value,
            "kappa": self.kappa,
            "kappa_neg": self.kappa_neg,
            "lambda": self.lam,
            "lipschitz": self.K,
        }
