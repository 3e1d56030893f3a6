"""holobrack：约束哈密顿力学的 Dirac-Bergmann 算法、狄拉克括号与线性势量子谱"""
from .core import BallParams, IntrinsicParams, Config, get_config, set_config, HolobrackError
from .algebra import PhaseSpace, PhasePoint, Poly, poisson_bracket
from .mechanics import ConstrainedSystem, ball_system, dirac_bergmann, dirac_bracket, legendre_transform
from .dynamics import integrate, eom_vector_field, intrinsic_acceleration
from .quantum import wall_spectrum, wedge_spectrum, intrinsic_params, intrinsic_equivalence_check

__version__ = "0.1.0"

__all__ = [
    "BallParams",
    "IntrinsicParams",
    "Config",
    "get_config",
    "set_config",
    "HolobrackError",
    "PhaseSpace",
    "PhasePoint",
    "Poly",
    "poisson_bracket",
    "ConstrainedSystem",
    "ball_system",
    "dirac_bergmann",
    "dirac_bracket",
    "legendre_transform",
    "integrate",
    "eom_vector_field",
    "intrinsic_acceleration",
    "wall_spectrum",
    "wedge_spectrum",
    "intrinsic_params",
    "intrinsic_equivalence_check",
]
