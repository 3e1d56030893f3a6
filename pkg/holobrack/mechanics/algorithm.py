from dataclasses import replace
from typing import Callable, Dict, List, Mapping, Optional, Sequence

from loguru import logger

from ..algebra import PhaseSpace, Poly, poisson_bracket
from ..core.config import get_config
from ..core.exceptions import DimensionError, InconsistentDynamicsError, IterationLimitError
from .multipliers import classify_constraints, fix_gauge, solve_multipliers
from .surface import rank_increases, weakly_zero
from .system import ConstrainedSystem, Constraint
from .theta import theta_matrix

Normalizer = Callable[[Poly], Poly]


def leading_sign(expr: Poly) -> Poly:
    """使字典序最大的单项式系数为正"""
    if expr.is_zero():
        return expr
    lead = max(expr.terms)
    return -expr if expr.terms[lead] < 0 else expr


def multiplier_coordinates(H: Poly, primaries: Sequence[Constraint]) -> List[str]:
    """共轭动量本身是初级约束、且 H 对其至多线性的坐标"""
    space = H.space
    coords = []
    for q in space.positions:
        p = Poly.variable(space, space.conjugate(q))
        if not any(_proportional(c.expr, p) for c in primaries):
            continue
        if H.partial(q).partial(q).is_zero():
            coords.append(q)
    return coords


def _proportional(a: Poly, b: Poly) -> bool:
    if a.is_zero() or b.is_zero():
        return False
    return not rank_increases([a], b)


def dirac_bergmann(
    H: Poly,
    primaries: Sequence[Constraint],
    space: Optional[PhaseSpace] = None,
    max_iter: Optional[int] = None,
    normalizer: Optional[Normalizer] = None,
    gauge: Optional[Mapping[int, float]] = None,
) -> ConstrainedSystem:
    """Dirac-Bergmann 约束算法

    第 k 轮处理上一轮得到的约束（第 1 轮处理初级约束，同一轮内先进先出）：
    计算 Φ̇ = {Φ, H_T}，若含乘子则记为乘子方程；否则余项弱为零时不做处理，
    不弱为零时作为新的独立约束加入。某一轮没有新约束时循环终止，
    然后计算 Θ、约束分类并求解乘子。

    Args:
        H: 正则哈密顿量
        primaries: 初级约束
        space: 相空间，默认取 H 的相空间
        max_iter: 迭代上限，默认取配置 max_iter
        normalizer: 新约束的规范化函数，默认只调整符号
        gauge: 自由乘子的规范固定值

    Returns:
        ConstrainedSystem: 分类完毕、乘子已求解的系统
    """
    if not primaries:
        raise ValueError("Dirac-Bergmann 算法需要至少一个初级约束")
    space = space or H.space
    if H.space != space or any(c.expr.space != space for c in primaries):
        raise DimensionError("哈密顿量、约束与相空间不一致")
    max_iter = get_config().max_iter if max_iter is None else max_iter
    if max_iter < 1:
        raise ValueError(f"max_iter 必须 ≥ 1，当前为 {max_iter}")
    normalizer = normalizer or leading_sign

    coords = multiplier_coordinates(H, primaries)
    zero_coords = {q: 0.0 for q in coords}
    coord_sources = {q: H.partial(q) for q in coords}

    found: List[Constraint] = [replace(c, stage=0) for c in primaries]
    absorbed: Dict[int, str] = {}
    equations: List[int] = []
    frontier = list(range(len(found)))
    iteration = 0

    while True:
        iteration += 1
        if iteration > max_iter:
            raise IterationLimitError(f"Dirac-Bergmann 算法在 {max_iter} 轮内未终止")
        new: List[Constraint] = []
        for idx in frontier:
            current = found[idx]
            exprs = [c.expr for c in found + new]
            dot = poisson_bracket(current.expr, H, space)

            # 乘子坐标项与总哈密顿量中新乘子项的系数
            coefficients = [dot.partial(q) for q in coords]
            coefficients += [
                poisson_bracket(current.expr, c.expr, space)
                for k, c in enumerate(found) if k not in absorbed
            ]
            if any(not weakly_zero(coef, exprs) for coef in coefficients):
                equations.append(idx)
                logger.debug(f"第 {iteration} 轮：{current.expr} 的一致性条件给出乘子方程")
                continue

            remainder = dot.restrict(zero_coords)
            if weakly_zero(remainder, exprs):
                continue
            if remainder.is_constant():
                raise InconsistentDynamicsError(f"一致性条件要求常数 {remainder.constant_term()} ≈ 0")

            candidate = normalizer(remainder)
            if not rank_increases(exprs, candidate):
                continue
            new.append(Constraint(expr=candidate, stage=iteration, label=0))
            logger.info(f"第 {iteration} 轮发现次级约束: {candidate}")

        if not new:
            break
        start = len(found)
        found.extend(new)
        for k in range(start, len(found)):
            for q in coords:
                if q not in absorbed.values() and _proportional(coord_sources[q], found[k].expr):
                    absorbed[k] = q
        frontier = list(range(start, len(found)))

    logger.info(f"Dirac-Bergmann 循环在第 {iteration} 轮终止，共 {len(found)} 个约束")

    # 被乘子坐标吸收的约束按坐标顺序排在前面，其余按发现顺序
    order = sorted(absorbed, key=lambda k: coords.index(absorbed[k]))
    order += [k for k in range(len(found)) if k not in absorbed]
    labels = {k: i + 1 for i, k in enumerate(order)}
    taken = set(space.names)
    constraints = []
    for k in order:
        label = labels[k]
        if k in absorbed:
            name = absorbed[k]
        else:
            name = f"chi{label}" if f"chi{label}" not in taken else f"lambda{label}"
        constraints.append(replace(found[k], label=label, multiplier=name, absorbed=k in absorbed))

    system = ConstrainedSystem(
        space=space,
        hamiltonian=H,
        constraints=tuple(constraints),
        theta=theta_matrix(constraints, space),
        multiplier_coordinates=tuple(coords),
        iterations=iteration,
        equations=tuple(sorted(labels[k] for k in equations)),
    )
    system = classify_constraints(system)
    system = replace(system, multipliers=solve_multipliers(system))
    return fix_gauge(system, gauge)
