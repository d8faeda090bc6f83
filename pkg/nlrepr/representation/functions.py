"""Strictly monotone reward functions f(t, l)."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from nlrepr.utils.exceptions import ParameterError


class Family(str, enum.Enum):
    AFFINE = "AFFINE"
    IDENTITY = "IDENTITY"
    SCALED = "SCALED"
    PIECEWISE = "PIECEWISE"


class Direction(str, enum.Enum):
    DECREASING = "DECREASING"
    INCREASING = "INCREASING"


def _coefficients(values, name):
    array = np.atleast_1d(np.asarray(values, dtype=float))
    if array.ndim != 1 or not np.isfinite(array).all():
        msg = f"{name} must be a finite scalar or one value per time"
        raise ParameterError(msg)
    return tuple(array.tolist())


@dataclass(frozen=True)
class FSpec:
    """``f(t, l)``, continuous and strictly monotone in ``l`` with linear tails.

    * AFFINE: ``a_t - b_t l`` (DECREASING) or ``a_t + b_t l`` (INCREASING), ``b_t > 0``
    * IDENTITY: ``l`` (always INCREASING)
    * SCALED: ``-c_t l`` or ``c_t l``, ``c_t > 0``
    * PIECEWISE: ``a_t -/+ b_t phi(l)`` where ``phi`` interpolates ``knots`` and
      ``values`` (strictly increasing) with positive tail slopes

    Coefficients are a scalar or one entry per time ``0..N``.
    """

    family: Family = Family.IDENTITY
    direction: Direction = Direction.INCREASING
    a: tuple = (0.0,)
    b: tuple = (1.0,)
    knots: tuple = ()
    values: tuple = ()
    left_slope: float = 1.0
    right_slope: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "direction", Direction(self.direction))
        object.__setattr__(self, "a", _coefficients(self.a, "a"))
        object.__setattr__(self, "b", _coefficients(self.b, "b"))
        if self.family is Family.IDENTITY and self.direction is not Direction.INCREASING:
            msg = "the identity is increasing"
            raise ParameterError(msg)
        if min(self.b) <= 0:
            msg = "slopes must be positive"
            raise ParameterError(msg)
        if self.family is Family.PIECEWISE:
            knots = np.asarray(self.knots, dtype=float)
            values = np.asarray(self.values, dtype=float)
            if knots.size == 0 or knots.shape != values.shape:
                msg = "PIECEWISE needs matching, non-empty knots and values"
                raise ParameterError(msg)
            if (np.diff(knots) <= 0).any() or (np.diff(values) <= 0).any():
                msg = "PIECEWISE knots and values must be strictly increasing"
                raise ParameterError(msg)
            if self.left_slope <= 0 or self.right_slope <= 0:
                msg = "PIECEWISE tails need positive slopes"
                raise ParameterError(msg)
            object.__setattr__(self, "knots", tuple(knots.tolist()))
            object.__setattr__(self, "values", tuple(values.tolist()))

    # constructors ------------------------------------------------------

    @classmethod
    def identity(cls) -> FSpec:
        return cls(Family.IDENTITY, Direction.INCREASING)

    @classmethod
    def affine(cls, a=0.0, b=1.0, direction=Direction.DECREASING) -> FSpec:
        return cls(Family.AFFINE, direction, a=a, b=b)

    @classmethod
    def scaled(cls, c, direction=Direction.INCREASING) -> FSpec:
        return cls(Family.SCALED, direction, b=c)

    @classmethod
    def piecewise(
        cls, knots, values, left_slope=1.0, right_slope=1.0, a=0.0, b=1.0,
        direction=Direction.DECREASING,
    ) -> FSpec:
        return cls(
            Family.PIECEWISE, direction, a=a, b=b, knots=tuple(knots), values=tuple(values),
            left_slope=left_slope, right_slope=right_slope,
        )

    # evaluation --------------------------------------------------------

    @property
    def increasing(self) -> bool:
        return self.direction is Direction.INCREASING

    @property
    def sign(self) -> float:
        return 1.0 if self.increasing else -1.0

    def _coef(self, coef, t):
        array = np.asarray(coef)
        t = np.asarray(t)
        if array.size == 1:
            return array[0]
        if t.size and (t.max() >= array.size):
            msg = f"coefficient given for {array.size} times, time {int(t.max())} requested"
            raise ParameterError(msg)
        return array[t]

    def _shape(self, l):
        if self.family is not Family.PIECEWISE:
            return l
        x, y = np.asarray(self.knots), np.asarray(self.values)
        inner = np.interp(l, x, y)
        below = y[0] + self.left_slope * (l - x[0])
        above = y[-1] + self.right_slope * (l - x[-1])
        return np.where(l < x[0], below, np.where(l > x[-1], above, inner))

    def __call__(self, t, l):
        """Evaluate at times ``t`` (broadcast against ``l``)."""
        l = np.asarray(l, dtype=float)
        if self.family is Family.IDENTITY:
            return l
        scale = self._coef(self.b, t)
        offset = self._coef(self.a, t) if self.family in (Family.AFFINE, Family.PIECEWISE) else 0.0
        return offset + self.sign * scale * self._shape(l)

    def min_slope(self, horizon: int | None = None) -> float:
        """Smallest absolute slope in ``l`` over all times."""
        if self.family is Family.IDENTITY:
            return 1.0
        b = np.asarray(self.b)
        if horizon is not None and b.size > 1:
            b = b[: horizon + 1]
        slope = float(b.min())
        if self.family is Family.PIECEWISE:
            x, y = np.asarray(self.knots), np.asarray(self.values)
            segments = np.diff(y) / np.diff(x) if x.size > 1 else np.array([np.inf])
            slope *= min(float(segments.min()), self.left_slope, self.right_slope)
        return slope

    def check_horizon(self, horizon: int):
        """Per-time coefficients must cover ``0..horizon``."""
        for name in ("a", "b"):
            coef = getattr(self, name)
            if len(coef) > 1 and len(coef) < horizon + 1:
                msg = f"{name} has {len(coef)} entries, {horizon + 1} times required"
                raise ParameterError(msg)

    @classmethod
    def from_dict(cls, data) -> FSpec:
        data = dict(data or {"family": "IDENTITY"})
        try:
            family = Family(str(data.get("family", "IDENTITY")).upper())
            default = "INCREASING" if family is Family.IDENTITY else "DECREASING"
            direction = Direction(str(data.get("direction", default)).upper())
        except ValueError as e:
            msg = f"bad f specification: {e}"
            raise ParameterError(msg) from None
        scale = data.get("c", data.get("b", 1.0))
        return cls(
            family,
            direction,
            a=data.get("a", 0.0),
            b=scale,
            knots=tuple(data.get("knots", ())),
            values=tuple(data.get("values", ())),
            left_slope=float(data.get("left_slope", 1.0)),
            right_slope=float(data.get("right_slope", 1.0)),
        )

    def to_dict(self) -> dict:
        data = {
            "family": self.family.value,
            "direction": self.direction.value,
            "a": list(self.a),
            "b": list(self.b),
        }
        if self.family is Family.PIECEWISE:
            data.update(
                knots=list(self.knots),
                values=list(self.values),
                left_slope=self.left_slope,
                right_slope=self.right_slope,
            )
        return data
