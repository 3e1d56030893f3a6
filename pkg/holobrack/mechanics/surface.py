"""弱等式与约束面采样

F ≈ 0 指 F 在约束面上恒为零。约束全为线性时，把 F 代入约束面的参数化
z = z₀ + N t，检查得到的 t 多项式是否为零；出现非线性约束时，改为检查
F 是否落在 {单项式 × Φⱼ}（总次数不超过 deg F）的线性张成里。
一次的 F 配线性约束只需看常系数张成。
"""
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from ..algebra import PhaseSpace, Poly
from ..algebra.poly import Monomial
from ..core.config import get_config

# t 多项式：指数元组 -> 系数
TPoly = Dict[Tuple[int, ...], float]


def coefficient_matrix(polys: Sequence[Poly]) -> Tuple[List[Monomial], np.ndarray]:
    """把若干多项式排成系数矩阵，每行一个多项式"""
    monomials = sorted({e for p in polys for e in p.terms})
    column = {e: j for j, e in enumerate(monomials)}
    mat = np.zeros((len(polys), len(monomials)))
    for i, p in enumerate(polys):
        for e, c in p.terms.items():
            mat[i, column[e]] = c
    return monomials, mat


def span_residual(F: Poly, constraints: Sequence[Poly]) -> Poly:
    """F 减去它在约束张成上的最小二乘投影"""
    if not constraints or F.is_zero():
        return F
    monomials, mat = coefficient_matrix(list(constraints) + [F])
    basis, target = mat[:-1].T, mat[-1]
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    residual = target - basis @ coef
    return Poly(F.space, dict(zip(monomials, residual)), scale=max(1.0, F.max_abs()))


def monomial_multiples(constraints: Sequence[Poly], degree: int) -> List[Poly]:
    """所有 m·Φⱼ，其中单项式 m 使总次数不超过 degree"""
    out: List[Poly] = []
    for phi in constraints:
        room = degree - phi.degree()
        if room < 0:
            continue
        space = phi.space
        for d in range(room + 1):
            for combo in combinations_with_replacement(range(space.size), d):
                exps = [0] * space.size
                for i in combo:
                    exps[i] += 1
                out.append(phi * Poly(space, {tuple(exps): 1.0}))
    return out


def surface_parameterization(constraints: Sequence[Poly], space: PhaseSpace) -> Tuple[np.ndarray, np.ndarray]:
    """线性约束面 z = z₀ + N t：返回 (z₀, N)，N 的列是正交归一的零空间基"""
    A, b = linear_system(constraints, space)
    z0, *_ = np.linalg.lstsq(A, -b, rcond=None)
    return z0, null_space(A)


def _tpoly_mul(a: TPoly, b: TPoly) -> TPoly:
    out: TPoly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(i + j for i, j in zip(ea, eb))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def restrict_to_surface(F: Poly, z0: np.ndarray, basis: np.ndarray) -> TPoly:
    """把 F 代入 z = z₀ + N t，返回 t 的多项式"""
    k = basis.shape[1]
    zero = (0,) * k
    forms: List[TPoly] = []
    for i in range(F.space.size):
        form: TPoly = {zero: float(z0[i])}
        for j in range(k):
            unit = tuple(int(m == j) for m in range(k))
            form[unit] = float(basis[i, j])
        forms.append(form)

    total: TPoly = {}
    for exps, coef in F.terms.items():
        term: TPoly = {zero: coef}
        for i, power in enumerate(exps):
            for _ in range(power):
                term = _tpoly_mul(term, forms[i])
        for key, value in term.items():
            total[key] = total.get(key, 0.0) + value
    return total


def weakly_zero(F: Poly, constraints: Sequence[Poly], tol: Optional[float] = None) -> bool:
    """F ≈ 0：F 在约束面上恒为零"""
    tol = get_config().weak_tolerance if tol is None else tol
    if F.is_zero():
        return True
    if not constraints:
        return False
    scale = max(1.0, F.max_abs())
    linear = all(p.degree() <= 1 for p in constraints)
    if linear and F.degree() <= 1:
        return span_residual(F, constraints).max_abs() <= tol * scale
    if linear:
        z0, basis = surface_parameterization(constraints, F.space)
        reach = max(1.0, float(np.abs(z0).max(initial=0.0)))
        restricted = restrict_to_surface(F, z0, basis)
        worst = max((abs(c) for c in restricted.values()), default=0.0)
        return worst <= tol * scale * reach ** F.degree()
    multiples = monomial_multiples(constraints, F.degree())
    return span_residual(F, multiples).max_abs() <= tol * scale


def rank_increases(existing: Sequence[Poly], candidate: Poly, tol: Optional[float] = None) -> bool:
    """候选多项式与已有多项式叠放后秩是否增加"""
    tol = get_config().rank_tolerance if tol is None else tol
    if candidate.is_zero():
        return False
    if not existing:
        return True
    _, mat = coefficient_matrix(list(existing) + [candidate])
    scale = max(1.0, np.abs(mat).max())
    before = np.linalg.matrix_rank(mat[:-1], tol=tol * scale)
    after = np.linalg.matrix_rank(mat, tol=tol * scale)
    return after > before


def linear_system(constraints: Sequence[Poly], space: PhaseSpace) -> Tuple[np.ndarray, np.ndarray]:
    """把线性约束写成 A z + b 的形式"""
    A = np.zeros((len(constraints), space.size))
    b = np.zeros(len(constraints))
    for i, p in enumerate(constraints):
        if p.degree() > 1:
            raise ValueError(f"只支持线性约束，第 {i + 1} 个约束次数为 {p.degree()}")
        b[i] = p.constant_term()
        for name, c in p.linear_coefficients().items():
            A[i, space.index(name)] = c
    return A, b


def surface_points(
    constraints: Sequence[Poly],
    count: int,
    seed: int = 0,
    space: Optional[PhaseSpace] = None,
) -> np.ndarray:
    """在线性约束面上均匀采样参数 t ∈ [−1, 1]，返回形状 (count, 2n) 的点"""
    if space is None:
        if not constraints:
            raise ValueError("没有约束时必须给出相空间")
        space = constraints[0].space
    rng = np.random.default_rng(seed)
    if not constraints:
        return rng.uniform(-1.0, 1.0, size=(count, space.size))
    z0, basis = surface_parameterization(constraints, space)
    t = rng.uniform(-1.0, 1.0, size=(count, basis.shape[1]))
    return z0[None, :] + t @ basis.T


def to_poly(space: PhaseSpace, monomials: Sequence[Monomial], coefs: np.ndarray) -> Poly:
    terms: Dict[Monomial, float] = dict(zip(monomials, np.asarray(coefs, dtype=float)))
    return Poly(space, terms, scale=max(1.0, float(np.abs(coefs).max(initial=0.0))))
