from typing import Dict, Sequence, Tuple

from ..algebra import Poly, poisson_bracket
from ..core.config import get_config
from ..core.exceptions import IncompleteSystemError
from .system import ConstrainedSystem


def dirac_bracket(F: Poly, G: Poly, system: ConstrainedSystem) -> Poly:
    """狄拉克括号 {F,G}_D = {F,G} − Σ {F,Φ_j} (Θ̃⁻¹)^{jl} {Φ_l,G}

    求和只跑第二类约束；第一类约束在规范固定后不参与。
    没有第二类约束时退化为泊松括号。
    """
    if not system.classified:
        raise IncompleteSystemError("约束尚未分类，无法计算狄拉克括号")
    base = poisson_bracket(F, G, system.space)
    labels = system.second_class
    if not labels:
        return base

    inverse = system.second_class_inverse
    exprs = [system.constraint(label).expr for label in labels]
    left = [poisson_bracket(F, phi) for phi in exprs]
    right = [poisson_bracket(phi, G) for phi in exprs]
    cutoff = get_config().zero_threshold * max(1.0, abs(inverse).max())

    correction = Poly.zero(system.space)
    for j, fj in enumerate(left):
        if fj.is_zero():
            continue
        for l, gl in enumerate(right):
            if gl.is_zero() or abs(inverse[j, l]) <= cutoff:
                continue
            correction = correction + float(inverse[j, l]) * fj * gl
    return Poly(
        system.space,
        (base - correction).terms,
        scale=max(1.0, base.max_abs(), correction.max_abs()),
    )


def dirac_bracket_table(
    system: ConstrainedSystem, left: Sequence[str], right: Sequence[str]
) -> Dict[Tuple[str, str], Poly]:
    """按变量名列出狄拉克括号 {a, b}_D"""
    space = system.space
    table = {}
    for a in left:
        for b in right:
            table[(a, b)] = dirac_bracket(Poly.variable(space, a), Poly.variable(space, b), system)
    return table
