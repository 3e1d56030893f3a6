from .system import (
    LagrangianSpec,
    Constraint,
    MultiplierSolution,
    ConstrainedSystem,
)
from .theta import ThetaMatrix, ThetaBlock, theta_matrix
from .surface import weakly_zero, surface_points, rank_increases
from .legendre import legendre_transform
from .multipliers import solve_multipliers, classify_constraints, fix_gauge
from .algorithm import dirac_bergmann
from .brackets import dirac_bracket, dirac_bracket_table
from .ball import ball_space, ball_lagrangian, ball_system

__all__ = [
    "LagrangianSpec",
    "Constraint",
    "MultiplierSolution",
    "ConstrainedSystem",
    "ThetaMatrix",
    "ThetaBlock",
    "theta_matrix",
    "weakly_zero",
    "surface_points",
    "rank_increases",
    "legendre_transform",
    "solve_multipliers",
    "classify_constraints",
    "fix_gauge",
    "dirac_bergmann",
    "dirac_bracket",
    "dirac_bracket_table",
    "ball_space",
    "ball_lagrangian",
    "ball_system",
]
