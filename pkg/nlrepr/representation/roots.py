"""Vectorized bracketing and bisection for monotone equations.

``scipy.optimize`` stops on either its x- or its f-tolerance; the solvers
here need both at once (|f| small *and* a tight bracket), applied to many
independent equations that share one evaluation callback.
"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from traitlets.log import get_logger

from nlrepr.utils.exceptions import BracketError


@dataclass
class RootResult:
    x: np.ndarray
    fx: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    iterations: np.ndarray
    expansions: int

    @property
    def max_abs_f(self) -> float:
        return float(np.max(np.abs(self.fx), initial=0.0))


def solve_monotone(
    func,
    x0,
    increasing: bool = True,
    *,
    ftol: float = 1e-11,
    xrtol: float = 1e-12,
    width: float = 1.0,
    factor: float = 2.0,
    limit: float = 1e300,
    maxiter: int = 4000,
):
    """Roots of an elementwise strictly monotone ``func``.

    ``func`` maps an array of trial points to an array of the same shape,
    element ``i`` depending on trial point ``i`` only. Brackets start at
    ``x0 -/+ width`` and grow geometrically; bisection then runs until
    ``|f| <= ftol`` and the bracket is narrower than ``xrtol * (1 + |x|)``,
    or until the bracket cannot be split in floating point.
    """
    sign = 1.0 if increasing else -1.0

    def phi(x):
        return sign * np.asarray(func(x), dtype=float)

    x0 = np.array(x0, dtype=float)
    lo, hi = x0 - width, x0 + width
    flo, fhi = phi(lo), phi(hi)
    step, expansions = width, 0
    while True:
        below, above = fhi < 0, flo > 0
        moving = below | above
        if not moving.any():
            break
        step *= factor
        expansions += 1
        trial = np.where(above, x0 - step, np.where(below, x0 + step, lo))
        if np.abs(trial[moving]).max() > limit:
            msg = f"no sign change within |x| <= {limit:g}; the function is not surjective"
            raise BracketError(msg)
        ftrial = phi(trial)
        lo, hi, flo, fhi = (
            np.where(above, trial, np.where(below, hi, lo)),
            np.where(below, trial, np.where(above, lo, hi)),
            np.where(above, ftrial, np.where(below, fhi, flo)),
            np.where(below, ftrial, np.where(above, flo, fhi)),
        )
    if expansions:
        get_logger().debug("Bracket expanded %i times", expansions)

    x = np.where(flo == 0, lo, np.where(fhi == 0, hi, 0.5 * (lo + hi)))
    fx = phi(x)
    done = (flo == 0) | (fhi == 0)
    iterations = np.zeros(x.shape, dtype=int)
    for _ in range(maxiter):
        tight = (hi - lo) <= xrtol * (1 + np.abs(x))
        split = (x > lo) & (x < hi)
        done |= ((np.abs(fx) <= ftol) & tight) | (fx == 0) | ~split
        if done.all():
            break
        active = ~done
        iterations += active
        go_up = active & (fx < 0)
        go_down = active & (fx > 0)
        lo = np.where(go_up, x, lo)
        hi = np.where(go_down, x, hi)
        x = np.where(active, 0.5 * (lo + hi), x)
        fx = phi(x)
    else:
        msg = f"bisection did not finish in {maxiter} iterations"
        raise BracketError(msg)
    return RootResult(x, sign * fx, lo, hi, iterations, expansions)

