from .solver import (
    BruteForceResult,
    CriterionCheck,
    StoppingSolution,
    StoppingSolver,
    brute_force_value,
    check_criterion,
    criterion_table,
    snell,
    solve_stopping,
)

__all__ = [
    "BruteForceResult",
    "CriterionCheck",
    "StoppingSolution",
    "StoppingSolver",
    "brute_force_value",
    "check_criterion",
    "criterion_table",
    "snell",
    "solve_stopping",
]
