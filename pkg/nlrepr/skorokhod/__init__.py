from .obstacle import (
    FalsificationResult,
    ObstacleCheck,
    ObstacleReport,
    ObstacleSolution,
    ObstacleSolver,
    Orientation,
    Verdict,
    falsify_alternative,
    increase_points,
    obstacle_values,
    orientation_of,
    solve_obstacle,
    stopping_link,
    verify_obstacle,
)

__all__ = [
    "FalsificationResult",
    "ObstacleCheck",
    "ObstacleReport",
    "ObstacleSolution",
    "ObstacleSolver",
    "Orientation",
    "Verdict",
    "falsify_alternative",
    "increase_points",
    "obstacle_values",
    "orientation_of",
    "solve_obstacle",
    "stopping_link",
    "verify_obstacle",
]
