from .market import CRRParameters, MarketSpec, build_crr, crr_put_value
from .put import (
    AmericanPut,
    PayoffMode,
    boundary_fspec,
    boundary_problem,
    boundary_residual,
    check_exercise_criterion,
    exercise_times,
    put_snell_value,
    put_value,
    solve_boundary,
    strike_sweep,
    sweep_long,
)

__all__ = [
    "AmericanPut",
    "CRRParameters",
    "MarketSpec",
    "PayoffMode",
    "boundary_fspec",
    "boundary_problem",
    "boundary_residual",
    "build_crr",
    "check_exercise_criterion",
    "crr_put_value",
    "exercise_times",
    "put_snell_value",
    "put_value",
    "solve_boundary",
    "strike_sweep",
    "sweep_long",
]
