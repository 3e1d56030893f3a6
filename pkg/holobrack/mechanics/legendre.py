from typing import List, Tuple

import numpy as np
from loguru import logger
from scipy.linalg import null_space

from ..algebra import Poly
from ..core.config import get_config
from ..core.exceptions import NonPhysicalKineticError
from .system import Constraint, LagrangianSpec


def legendre_transform(spec: LagrangianSpec) -> Tuple[Poly, List[Constraint]]:
    """退化勒让德变换

    动量 p = M q̇；质量矩阵的零行给出初级约束 p ≈ 0，
    非退化块上的零模给出 v·p ≈ 0 形式的初级约束。

    Args:
        spec: 速度二次型拉格朗日量

    Returns:
        (H, primaries): H = ½ pᵀ M⁺ p + V 以及初级约束列表
    """
    space = spec.space
    mass = spec.mass_matrix
    scale = max(1.0, np.abs(mass).max())
    tol = get_config().rank_tolerance * scale

    eigvals = np.linalg.eigvalsh(mass)
    if (eigvals < -tol).any():
        raise NonPhysicalKineticError(f"质量矩阵存在负本征值: {eigvals[eigvals < -tol].tolist()}")

    momenta = [Poly.variable(space, p) for p in space.momenta]
    zero_rows = [i for i in range(space.n) if np.all(np.abs(mass[i]) <= tol)]

    primaries: List[Constraint] = []
    for i in zero_rows:
        primaries.append(Constraint(expr=momenta[i], stage=0, label=len(primaries) + 1))

    # 非零行内部的零模
    active = [i for i in range(space.n) if i not in zero_rows]
    if active:
        kernel = null_space(mass[np.ix_(active, active)], rcond=get_config().rank_tolerance)
        for v in kernel.T:
            expr = sum((float(c) * momenta[i] for c, i in zip(v, active)), Poly.zero(space))
            primaries.append(Constraint(expr=expr, stage=0, label=len(primaries) + 1))

    inverse = np.linalg.pinv(mass, rcond=get_config().rank_tolerance)
    cutoff = get_config().zero_threshold * max(1.0, np.abs(inverse).max())
    kinetic = Poly.zero(space)
    for i in range(space.n):
        for j in range(space.n):
            if abs(inverse[i, j]) > cutoff:
                kinetic = kinetic + 0.5 * float(inverse[i, j]) * momenta[i] * momenta[j]

    H = kinetic + spec.potential
    logger.info(f"勒让德变换完成：{len(primaries)} 个初级约束 {[str(c.expr) for c in primaries]}")
    return H, primaries
