from typing import Dict, Optional, Sequence, Union

from ..core.exceptions import DimensionError
from .poly import Monomial, Poly
from .space import PhasePoint, PhaseSpace


def _check_space(F: Poly, G: Poly, space: Optional[PhaseSpace]) -> PhaseSpace:
    if F.space != G.space:
        raise DimensionError("泊松括号的两个多项式属于不同的相空间")
    if space is not None and space != F.space:
        raise DimensionError("给定相空间与多项式所属相空间不一致")
    return F.space


def poisson_bracket(F: Poly, G: Poly, space: Optional[PhaseSpace] = None) -> Poly:
    """泊松括号 {F, G} = Σ (∂F/∂q ∂G/∂p − ∂G/∂q ∂F/∂p)

    :param F: 多项式
    :param G: 多项式
    :param space: 可选，用于校验两者所属的相空间
    :return: 裁剪后的多项式
    """
    space = _check_space(F, G, space)
    n = space.n
    terms: Dict[Monomial, float] = {}
    for ef, cf in F.terms.items():
        for eg, cg in G.terms.items():
            for mu in range(n):
                q, p = mu, mu + n
                # ∂F/∂q ∂G/∂p
                if ef[q] and eg[p]:
                    key = list(a + b for a, b in zip(ef, eg))
                    key[q] -= 1
                    key[p] -= 1
                    key = tuple(key)
                    terms[key] = terms.get(key, 0.0) + cf * cg * ef[q] * eg[p]
                # −∂G/∂q ∂F/∂p
                if eg[q] and ef[p]:
                    key = list(a + b for a, b in zip(ef, eg))
                    key[q] -= 1
                    key[p] -= 1
                    key = tuple(key)
                    terms[key] = terms.get(key, 0.0) - cf * cg * eg[q] * ef[p]
    return Poly(space, terms, scale=F.max_abs() * G.max_abs())


def partial(F: Poly, name: str) -> Poly:
    return F.partial(name)


def evaluate(F: Poly, point: Union[PhasePoint, Sequence[float]]) -> float:
    return F.evaluate(point)
