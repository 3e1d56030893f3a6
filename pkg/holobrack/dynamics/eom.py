from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..algebra import PhasePoint, Poly
from ..core.exceptions import IncompleteSystemError
from ..mechanics import ConstrainedSystem, dirac_bracket


def evolution_hamiltonian(system: ConstrainedSystem) -> Poly:
    """H₀ 加上规范固定后的第一类约束项"""
    H = system.reduced_hamiltonian
    for label, sol in system.multipliers.items():
        if sol.is_free and sol.gauge:
            H = H + sol.gauge * system.constraint(label).expr
    return H


class VectorField:
    """ż = {z, H}_D

    所有速率多项式都是一次时退化成矩阵形式 ż = A z + c。
    """

    def __init__(self, system: ConstrainedSystem, rates: Dict[str, Poly]):
        self.system = system
        self.space = system.space
        self.rates = rates
        self._linear = all(p.degree() <= 1 for p in rates.values())
        if self._linear:
            self._A, self._c = self._matrix()
        else:
            self._compiled = [rates[name].compile() for name in self.space.names]

    def _matrix(self) -> Tuple[np.ndarray, np.ndarray]:
        size = self.space.size
        A = np.zeros((size, size))
        c = np.zeros(size)
        for i, name in enumerate(self.space.names):
            rate = self.rates[name]
            c[i] = rate.constant_term()
            for var, coef in rate.linear_coefficients().items():
                A[i, self.space.index(var)] = coef
        return A, c

    @property
    def is_linear(self) -> bool:
        return self._linear

    def matrix_form(self) -> Tuple[np.ndarray, np.ndarray]:
        if not self._linear:
            raise ValueError("速率不是一次多项式，没有矩阵形式")
        return self._A.copy(), self._c.copy()

    def __call__(self, z) -> np.ndarray:
        z = z.values if isinstance(z, PhasePoint) else np.asarray(z, dtype=float)
        if self._linear:
            return self._A @ z + self._c
        return np.array([f(z) for f in self._compiled], dtype=float)

    def rate(self, name: str) -> Poly:
        return self.rates[name]


def _check_complete(system: ConstrainedSystem) -> None:
    if not system.classified:
        raise IncompleteSystemError("约束尚未分类")
    for label in system.second_class:
        sol = system.multipliers.get(label)
        if sol is None or sol.status == "free":
            raise IncompleteSystemError(f"第二类约束 {label} 的乘子尚未求出")


def eom_vector_field(system: ConstrainedSystem) -> VectorField:
    """由狄拉克括号给出运动方程 Ḟ = {F, H}_D

    :param system: 约束已分类、乘子已求解的系统
    :return: 可调用的向量场
    """
    _check_complete(system)
    H = evolution_hamiltonian(system)
    space = system.space
    rates = {
        name: dirac_bracket(Poly.variable(space, name), H, system)
        for name in space.names
    }
    logger.debug(f"运动方程: { {k: str(v) for k, v in rates.items() if not v.is_zero()} }")
    return VectorField(system, rates)


def accelerations(
    system: ConstrainedSystem,
    names: Sequence[str],
    point: Optional[PhasePoint] = None,
) -> Dict[str, float]:
    """二阶时间导数 {{q, H}_D, H}_D，默认在约束面上的一个采样点求值"""
    _check_complete(system)
    H = evolution_hamiltonian(system)
    space = system.space
    values = point.values if point is not None else system.surface_points(1, seed=11)[0]
    out = {}
    for name in names:
        velocity = dirac_bracket(Poly.variable(space, name), H, system)
        out[name] = dirac_bracket(velocity, H, system).evaluate(values)
    return out
