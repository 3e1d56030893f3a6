"""斜面上无滑滚动小球

约束标签 1…6 与乘子坐标 χ1, χ2 及动量 Π1, Π2 的约定：
Φ₁ = (tanφ)x + y，Φ₂ = (secφ)x − Rθ，Φ₃ = Π₁，Φ₄ = Π₂，
Φ₅ = (tanφ)Pₓ + P_y，Φ₆ = (secφ)Pₓ − (a+3)P_θ/(2R)。
"""
import math
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from loguru import logger

from ..algebra import PhaseSpace, Poly
from ..core.params import BallParams
from .algorithm import dirac_bergmann, leading_sign
from .legendre import legendre_transform
from .system import ConstrainedSystem, LagrangianSpec

BALL_PAIRS = (
    ("x", "Px"),
    ("y", "Py"),
    ("theta", "Ptheta"),
    ("chi1", "Pi1"),
    ("chi2", "Pi2"),
)
PHYSICAL_POSITIONS = ("x", "y", "theta")
PHYSICAL_MOMENTA = ("Px", "Py", "Ptheta")


def ball_space() -> PhaseSpace:
    return PhaseSpace(BALL_PAIRS)


def rolling_constraints(params: BallParams, space: Optional[PhaseSpace] = None) -> Tuple[Poly, Poly]:
    """斜面约束 Φ₁ 与无滑滚动约束 Φ₂"""
    space = space or ball_space()
    phi1 = Poly.linear(space, {"x": params.tan, "y": 1.0})
    phi2 = Poly.linear(space, {"x": params.sec, "theta": -params.R})
    return phi1, phi2


def ball_lagrangian(params: BallParams) -> LagrangianSpec:
    """L_hol = ½m(ẋ² + ẏ²) + ½Iθ̇² − mgy − χ¹Φ₁ − χ²Φ₂"""
    space = ball_space()
    phi1, phi2 = rolling_constraints(params, space)
    mass = np.diag([params.m, params.m, params.inertia_factor, 0.0, 0.0])
    potential = (
        params.m * params.g * Poly.variable(space, "y")
        + Poly.variable(space, "chi1") * phi1
        + Poly.variable(space, "chi2") * phi2
    )
    return LagrangianSpec(space=space, mass_matrix=mass, potential=potential)


def ball_normalizer(params: BallParams) -> Callable[[Poly], Poly]:
    """符号规范化之外，只含动量的约束再乘以 m"""
    momenta = set(ball_space().momenta)

    def normalize(expr: Poly) -> Poly:
        expr = leading_sign(expr)
        if expr.variables() and expr.variables() <= momenta:
            expr = expr * params.m
        return expr

    return normalize


def ball_system(
    params: BallParams,
    max_iter: Optional[int] = None,
    gauge: Optional[Dict[int, float]] = None,
) -> ConstrainedSystem:
    """从 L_hol 出发构建约束系统"""
    spec = ball_lagrangian(params)
    H, primaries = legendre_transform(spec)
    system = dirac_bergmann(
        H, primaries, spec.space, max_iter=max_iter, normalizer=ball_normalizer(params), gauge=gauge
    )
    logger.info(f"小球系统构建完成：{len(system.constraints)} 个约束，迭代 {system.iterations} 轮")
    return system


# ----------------------------------------------------------------------
# 闭式结果，用于校验
# ----------------------------------------------------------------------
def expected_constraints(params: BallParams) -> Dict[int, Poly]:
    space = ball_space()
    phi1, phi2 = rolling_constraints(params, space)
    return {
        1: phi1,
        2: phi2,
        3: Poly.variable(space, "Pi1"),
        4: Poly.variable(space, "Pi2"),
        5: Poly.linear(space, {"Px": params.tan, "Py": 1.0}),
        6: Poly.linear(space, {"Px": params.sec, "Ptheta": -(params.a + 3.0) / (2.0 * params.R)}),
    }


def theta_a_closed_form(params: BallParams) -> np.ndarray:
    """Θ_A = −[[sec²φ, secφ tanφ], [secφ tanφ, sec²φ + (a+3)/2]]"""
    s, t = params.sec, params.tan
    return -np.array([[s * s, s * t], [s * t, s * s + (params.a + 3.0) / 2.0]])


def theta_c_inverse_closed_form(params: BallParams) -> np.ndarray:
    """(1/(a+5)) [[(a+3)cos²φ + 2, −2 sinφ], [−2 sinφ, 2]]"""
    c, sn = math.cos(params.phi), math.sin(params.phi)
    return np.array([[(params.a + 3.0) * c * c + 2.0, -2.0 * sn], [-2.0 * sn, 2.0]]) / (params.a + 5.0)


def theta_a_inverse_closed_form(params: BallParams) -> np.ndarray:
    # Θ_A = −Θ_C，逆矩阵差一个符号
    return -theta_c_inverse_closed_form(params)


def multiplier_closed_form(params: BallParams) -> Tuple[float, float]:
    """χ¹ = −mg[(a+3)cos²φ + 2]/(a+5)，χ² = 2mg sinφ/(a+5)"""
    mg, a = params.m * params.g, params.a
    c, sn = math.cos(params.phi), math.sin(params.phi)
    return -mg * ((a + 3.0) * c * c + 2.0) / (a + 5.0), 2.0 * mg * sn / (a + 5.0)


def dirac_table_closed_form(params: BallParams) -> Dict[Tuple[str, str], float]:
    """坐标与动量之间全部九个狄拉克括号"""
    a, R = params.a, params.R
    c, sn = math.cos(params.phi), math.sin(params.phi)
    k = (a + 3.0) / (a + 5.0)
    return {
        ("x", "Px"): k * c * c,
        ("y", "Py"): k * sn * sn,
        ("x", "Py"): -k * math.sin(2.0 * params.phi) / 2.0,
        ("y", "Px"): -k * math.sin(2.0 * params.phi) / 2.0,
        ("theta", "Ptheta"): 2.0 / (a + 5.0),
        ("x", "Ptheta"): 2.0 * R * c / (a + 5.0),
        ("y", "Ptheta"): -2.0 * R * sn / (a + 5.0),
        ("theta", "Px"): k * c / R,
        ("theta", "Py"): -k * sn / R,
    }
