from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np

from ..algebra import Poly, PhaseSpace
from ..core.exceptions import VariableNameError
from .surface import surface_points, weakly_zero
from .theta import ThetaMatrix

ConstraintClass = Literal["first", "second", "unclassified"]
MultiplierStatus = Literal["solved", "zero_on_surface", "free"]


@dataclass(frozen=True)
class LagrangianSpec:
    """速度二次型拉格朗日量 L = ½ q̇ᵀ M q̇ − V(q)"""
    space: PhaseSpace
    mass_matrix: np.ndarray
    potential: Poly

    def __post_init__(self):
        mass = np.asarray(self.mass_matrix, dtype=float)
        if mass.shape != (self.space.n, self.space.n):
            raise ValueError(f"质量矩阵形状 {mass.shape} 与坐标数 {self.space.n} 不符")
        if not np.allclose(mass, mass.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(mass).max())):
            raise ValueError("质量矩阵必须对称")
        if any(not self.space.is_position(name) for name in self.potential.variables()):
            raise ValueError("势能只能依赖坐标")
        object.__setattr__(self, "mass_matrix", mass)


@dataclass(frozen=True)
class Constraint:
    """约束 Φ ≈ 0

    stage 为 0 表示初级约束，k ≥ 1 表示第 k 轮迭代发现的次级约束。
    multiplier 为与之配对的乘子名；absorbed 为 True 时乘子就是
    拉格朗日量中已有的坐标（如 chi1），否则是总哈密顿量中的新乘子。
    """
    expr: Poly
    stage: int
    label: int
    multiplier: str = ""
    absorbed: bool = False
    cls: ConstraintClass = "unclassified"

    @property
    def is_primary(self) -> bool:
        return self.stage == 0

    @property
    def stage_name(self) -> str:
        return "primary" if self.stage == 0 else f"secondary({self.stage})"


@dataclass(frozen=True)
class MultiplierSolution:
    """单个乘子的求解结果"""
    label: int
    name: str
    status: MultiplierStatus
    value: Optional[Poly] = None
    constant: Optional[float] = None
    gauge: float = 0.0

    @property
    def is_free(self) -> bool:
        return self.status == "free"

    def surface_value(self) -> Optional[float]:
        """约束面上的取值；自由乘子返回规范固定值"""
        if self.status == "free":
            return self.gauge
        if self.status == "zero_on_surface":
            return 0.0
        return self.constant


@dataclass(frozen=True)
class ConstrainedSystem:
    """带约束的哈密顿系统

    Attributes:
        space: 相空间
        hamiltonian: 正则哈密顿量 H（含乘子坐标项）
        constraints: 按标签排序的约束
        theta: 约束间泊松括号矩阵
        multipliers: 标签 -> 乘子求解结果
        multiplier_coordinates: 由初级约束 p ≈ 0 引入的乘子坐标
        iterations: Dirac-Bergmann 循环终止时的迭代轮数
        equations: 在循环中给出乘子方程的约束标签
    """
    space: PhaseSpace
    hamiltonian: Poly
    constraints: Tuple[Constraint, ...] = ()
    theta: Optional[ThetaMatrix] = None
    multipliers: Dict[int, MultiplierSolution] = field(default_factory=dict)
    multiplier_coordinates: Tuple[str, ...] = ()
    iterations: int = 0
    equations: Tuple[int, ...] = ()

    @classmethod
    def unconstrained(cls, hamiltonian: Poly) -> "ConstrainedSystem":
        return cls(space=hamiltonian.space, hamiltonian=hamiltonian)

    @property
    def labels(self) -> List[int]:
        return [c.label for c in self.constraints]

    def constraint(self, label: int) -> Constraint:
        for c in self.constraints:
            if c.label == label:
                return c
        raise VariableNameError(f"不存在标签为 {label} 的约束")

    @property
    def exprs(self) -> List[Poly]:
        return [c.expr for c in self.constraints]

    @property
    def first_class(self) -> List[int]:
        return [c.label for c in self.constraints if c.cls == "first"]

    @property
    def second_class(self) -> List[int]:
        return [c.label for c in self.constraints if c.cls == "second"]

    @property
    def classified(self) -> bool:
        return all(c.cls != "unclassified" for c in self.constraints)

    @cached_property
    def reduced_hamiltonian(self) -> Poly:
        """去掉乘子坐标项后的哈密顿量 H₀"""
        return self.hamiltonian.restrict({name: 0.0 for name in self.multiplier_coordinates})

    @cached_property
    def second_class_inverse(self) -> np.ndarray:
        """第二类约束子矩阵 Θ̃ 的逆，行列顺序与 second_class 一致"""
        return self.theta.inverse_over(self.second_class)

    def weakly_zero(self, F: Poly, tol: Optional[float] = None) -> bool:
        return weakly_zero(F, self.exprs, tol=tol)

    def surface_points(self, count: int, seed: int = 0) -> np.ndarray:
        return surface_points(self.exprs, count, seed=seed, space=self.space)

    def with_constraints(self, constraints: List[Constraint]) -> "ConstrainedSystem":
        return replace(self, constraints=tuple(constraints))
