"""小球的内禀一维描述与解析对照

内禀坐标只有沿斜面的 x：L = ½Mẋ² + f x，其中
M = m·sec²φ·(a+5)/(a+3)，f = m·g·tanφ。
"""
import math
from typing import Dict, Optional, Tuple

import numpy as np

from ..algebra import PhasePoint, PhaseSpace, Poly, poisson_bracket
from ..core.params import BallParams
from ..mechanics import ConstrainedSystem


def intrinsic_acceleration(params: BallParams) -> float:
    """ẍ = g·((a+3)/(a+5))·sin(2φ)/2"""
    return params.g * (params.a + 3.0) / (params.a + 5.0) * math.sin(2.0 * params.phi) / 2.0


def effective_mass(params: BallParams) -> float:
    return params.m * params.sec ** 2 * (params.a + 5.0) / (params.a + 3.0)


def effective_force(params: BallParams) -> float:
    return params.m * params.g * params.tan


def intrinsic_hamiltonian(params: BallParams) -> Tuple[PhaseSpace, Poly]:
    """H = P²/(2M) − f x，相空间只有一对 (x, P)"""
    space = PhaseSpace((("x", "P"),))
    P = Poly.variable(space, "P")
    x = Poly.variable(space, "x")
    H = (P * P) / (2.0 * effective_mass(params)) - effective_force(params) * x
    return space, H


def intrinsic_poisson_acceleration(params: BallParams) -> float:
    """ẍ = {{x, H}, H}，H 为内禀哈密顿量"""
    space, H = intrinsic_hamiltonian(params)
    velocity = poisson_bracket(Poly.variable(space, "x"), H)
    return poisson_bracket(velocity, H).constant_term()


def nonholonomic_acceleration(params: BallParams) -> Dict[str, float]:
    """修正 Euler-Lagrange 方程给出的加速度与约束力

    未知量 (ẍ, ÿ, θ̈, λ₁, λ₂) 满足
        m ẍ + λ₁ tanφ − λ₂ secφ = 0
        m ÿ + m g + λ₁ = 0
        I θ̈ + λ₂ R = 0
        tanφ ẍ + ÿ = 0
        secφ ẍ − R θ̈ = 0
    """
    m, g, R = params.m, params.g, params.R
    t, s, inertia = params.tan, params.sec, params.inertia_factor
    A = np.array([
        [m, 0.0, 0.0, t, -s],
        [0.0, m, 0.0, 1.0, 0.0],
        [0.0, 0.0, inertia, 0.0, R],
        [t, 1.0, 0.0, 0.0, 0.0],
        [s, 0.0, -R, 0.0, 0.0],
    ])
    b = np.array([0.0, -m * g, 0.0, 0.0, 0.0])
    xdd, ydd, tdd, lam1, lam2 = np.linalg.solve(A, b)
    return {"x": float(xdd), "y": float(ydd), "theta": float(tdd), "lambda1": float(lam1), "lambda2": float(lam2)}


def initial_state(
    system: ConstrainedSystem,
    params: BallParams,
    x0: float = 0.0,
    v0: float = 0.0,
) -> PhasePoint:
    """无滑滚动的初始状态

    坐标与速度由 x0, v0 经两条约束确定，乘子坐标取求得的常数，
    Π 取 0。默认从原点静止出发。
    """
    space = system.space
    t, s, R = params.tan, params.sec, params.R
    values = {
        "x": x0,
        "y": -t * x0,
        "theta": s * x0 / R,
        "Px": params.m * v0,
        "Py": -params.m * t * v0,
        "Ptheta": params.inertia_factor * s * v0 / R,
    }
    for name in system.multiplier_coordinates:
        sol = next((m for m in system.multipliers.values() if m.name == name), None)
        value: Optional[float] = sol.surface_value() if sol is not None else None
        values[name] = value if value is not None else 0.0
    return PhasePoint.from_mapping(space, values)
