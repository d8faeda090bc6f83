from .functions import Direction, Family, FSpec
from .roots import RootResult, solve_monotone
from .solver import (
    CharacterizationEntry,
    CharacterizationReport,
    Formulation,
    RepresentationProblem,
    RepresentationResult,
    RepresentationSolver,
    essinf_characterization,
    residual,
    solve,
    solve_l,
    tau_star,
)

__all__ = [
    "CharacterizationEntry",
    "CharacterizationReport",
    "Direction",
    "FSpec",
    "Family",
    "Formulation",
    "RepresentationProblem",
    "RepresentationResult",
    "RepresentationSolver",
    "RootResult",
    "essinf_characterization",
    "residual",
    "solve",
    "solve_l",
    "solve_monotone",
    "tau_star",
]
