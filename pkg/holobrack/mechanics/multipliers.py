from dataclasses import replace
from typing import Dict, Mapping, Optional

import numpy as np
from loguru import logger

from ..algebra import Poly, poisson_bracket
from ..core.config import get_config
from ..core.exceptions import InconsistentDynamicsError
from .surface import coefficient_matrix, to_poly, weakly_zero
from .system import ConstrainedSystem, MultiplierSolution


def consistency_rhs(system: ConstrainedSystem) -> Dict[int, Poly]:
    """b_j = {Φ_j, H}，乘子坐标取零"""
    zero = {name: 0.0 for name in system.multiplier_coordinates}
    return {
        c.label: poisson_bracket(c.expr, system.hamiltonian).restrict(zero)
        for c in system.constraints
    }


def _surface_constant(value: Poly, system: ConstrainedSystem, samples: int = 16) -> Optional[float]:
    if value.is_constant():
        return value.constant_term()
    try:
        points = system.surface_points(samples, seed=7)
    except ValueError:
        return None
    values = value.compile()(points)
    if np.ptp(values) <= get_config().weak_tolerance * max(1.0, np.abs(values).max()):
        return float(values.mean())
    return None


def solve_multipliers(system: ConstrainedSystem) -> Dict[int, MultiplierSolution]:
    """求解一致性条件 Θ·u = −b

    Θ 的非零部分被拆成互不相交的块，每个可逆方块独立求逆；
    不出现在任何块中的乘子（Θ 零列）是自由的。

    :param system: 已完成约束循环的系统
    :return: 标签 -> 乘子求解结果
    """
    if not system.constraints:
        return {}
    theta = system.theta
    rhs = consistency_rhs(system)
    exprs = system.exprs
    names = {c.label: c.multiplier for c in system.constraints}
    gauge = {label: sol.gauge for label, sol in system.multipliers.items()}

    for label in theta.zero_rows:
        if not weakly_zero(rhs[label], exprs):
            raise InconsistentDynamicsError(
                f"约束 {label} 的一致性条件不含乘子，且 {rhs[label]} 不弱为零"
            )

    solutions: Dict[int, MultiplierSolution] = {}
    for block in theta.blocks:
        b_polys = [rhs[r] for r in block.rows]
        monomials, b_mat = coefficient_matrix(b_polys)
        rhs_zero = all(weakly_zero(b, exprs) for b in b_polys)

        if block.invertible:
            u_mat = -block.inverse @ b_mat
            determined = True
        elif len(block.rows) == len(block.cols):
            if not rhs_zero:
                raise InconsistentDynamicsError(
                    f"Θ 块 {block.rows}×{block.cols} 奇异而右端不为零"
                )
            u_mat = np.zeros((len(block.cols), len(monomials)))
            determined = False
        else:
            u_mat, *_ = np.linalg.lstsq(block.matrix, -b_mat, rcond=None)
            residual = block.matrix @ u_mat + b_mat
            for row, res in zip(block.rows, residual):
                if not weakly_zero(to_poly(system.space, monomials, res), exprs):
                    raise InconsistentDynamicsError(f"Θ 块 {block.rows}×{block.cols} 的方程在约束 {row} 处无解")
            scale = max(1.0, np.abs(block.matrix).max())
            determined = np.linalg.matrix_rank(block.matrix, tol=get_config().rank_tolerance * scale) == len(block.cols)

        for col, coefs in zip(block.cols, u_mat):
            if not determined:
                solutions[col] = MultiplierSolution(col, names[col], "free", gauge=gauge.get(col, 0.0))
                continue
            value = to_poly(system.space, monomials, coefs) if monomials else Poly.zero(system.space)
            if weakly_zero(value, exprs):
                solutions[col] = MultiplierSolution(col, names[col], "zero_on_surface", value=value, constant=0.0)
            else:
                solutions[col] = MultiplierSolution(
                    col, names[col], "solved", value=value, constant=_surface_constant(value, system)
                )

    for label in system.labels:
        if label not in solutions:
            solutions[label] = MultiplierSolution(label, names[label], "free", gauge=gauge.get(label, 0.0))

    for label in sorted(solutions):
        sol = solutions[label]
        logger.debug(f"乘子 {sol.name}: {sol.status} {sol.value if sol.value is not None else ''}")
    return dict(sorted(solutions.items()))


def classify_constraints(system: ConstrainedSystem) -> ConstrainedSystem:
    """第一类：Θ 对应行为零且 {Φ, H} ≈ 0；其余为第二类"""
    if not system.constraints:
        return system
    exprs = system.exprs
    zero_rows = set(system.theta.zero_rows)
    classified = []
    for c in system.constraints:
        first = c.label in zero_rows and weakly_zero(poisson_bracket(c.expr, system.hamiltonian), exprs)
        classified.append(replace(c, cls="first" if first else "second"))
    logger.info(
        f"约束分类：第一类 {[c.label for c in classified if c.cls == 'first']}，"
        f"第二类 {[c.label for c in classified if c.cls == 'second']}"
    )
    return system.with_constraints(classified)


def fix_gauge(system: ConstrainedSystem, values: Optional[Mapping[int, float]] = None) -> ConstrainedSystem:
    """给自由乘子赋值（默认全部取 0）

    :param system: 已求解乘子的系统
    :param values: 标签 -> 取值，只允许自由乘子
    :return: 新系统
    """
    values = dict(values or {})
    multipliers = dict(system.multipliers)
    for label, value in values.items():
        sol = multipliers.get(label)
        if sol is None or not sol.is_free:
            raise ValueError(f"约束 {label} 的乘子不是自由的，不能做规范固定")
        multipliers[label] = replace(sol, gauge=float(value))
    for label, sol in multipliers.items():
        if sol.is_free and label not in values:
            multipliers[label] = replace(sol, gauge=0.0)
    return replace(system, multipliers=multipliers)
