"""约束系统的算符量子化

算符代数只在系数层面进行：对易子 [Â, B̂] = iħ{A, B}_D Î，
物理子空间上的约束算符恒等式以代换规则的形式使用。
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from ..algebra import Poly, PhaseSpace
from ..core.config import get_config
from ..core.exceptions import UnsupportedOrderError, UnsupportedQuantisationError
from ..core.params import BallParams
from ..mechanics import ConstrainedSystem, ball_system, dirac_bracket
from ..mechanics.ball import PHYSICAL_MOMENTA, PHYSICAL_POSITIONS
from .spectrum import intrinsic_params

Pair = Tuple[str, str]


@dataclass(frozen=True)
class OperatorTerm:
    """系数及其所含 ħ 的幂次"""
    coef: complex
    hbar_order: int = 0


def _merge(a: Optional[OperatorTerm], b: Optional[OperatorTerm]) -> OperatorTerm:
    if a is None:
        return b
    if b is None:
        return a
    return OperatorTerm(a.coef + b.coef, max(a.hbar_order, b.hbar_order))


@dataclass(frozen=True)
class OperatorExpr:
    """至多二次的算符表达式

    linear: 符号 -> OperatorTerm
    quadratic: 按字母表顺序排好的符号对 -> 实系数（对称乘积 (ÂB̂ + B̂Â)/2）
    identity: Î 的系数
    """
    linear: Dict[str, OperatorTerm] = field(default_factory=dict)
    quadratic: Dict[Pair, float] = field(default_factory=dict)
    identity: OperatorTerm = OperatorTerm(0j)
    alphabet: Tuple[str, ...] = PHYSICAL_POSITIONS + PHYSICAL_MOMENTA

    def __post_init__(self):
        for name in list(self.linear) + [s for pair in self.quadratic for s in pair]:
            if name not in self.alphabet:
                raise UnsupportedQuantisationError(f"算符符号 {name!r} 不在 {self.alphabet} 中")

    @classmethod
    def symbol(cls, name: str, coef: complex = 1.0, alphabet: Optional[Tuple[str, ...]] = None) -> "OperatorExpr":
        kwargs = {"alphabet": alphabet} if alphabet else {}
        return cls(linear={name: OperatorTerm(complex(coef))}, **kwargs)

    def _key(self, s: str, t: str) -> Pair:
        return (s, t) if self.alphabet.index(s) <= self.alphabet.index(t) else (t, s)

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        linear = dict(self.linear)
        for name, term in other.linear.items():
            linear[name] = _merge(linear.get(name), term)
        quadratic = dict(self.quadratic)
        for pair, coef in other.quadratic.items():
            quadratic[pair] = quadratic.get(pair, 0.0) + coef
        return OperatorExpr(linear, quadratic, _merge(self.identity, other.identity), self.alphabet)

    def __mul__(self, scalar: complex) -> "OperatorExpr":
        return OperatorExpr(
            {k: OperatorTerm(v.coef * scalar, v.hbar_order) for k, v in self.linear.items()},
            {k: float(np.real(v * scalar)) for k, v in self.quadratic.items()},
            OperatorTerm(self.identity.coef * scalar, self.identity.hbar_order),
            self.alphabet,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorExpr":
        return self * -1.0

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        return self + (-other)

    @property
    def is_linear(self) -> bool:
        return not any(abs(c) > 0.0 for c in self.quadratic.values())

    def coefficient(self, name: str) -> complex:
        term = self.linear.get(name)
        return term.coef if term else 0j

    def quadratic_coefficient(self, s: str, t: str) -> float:
        return self.quadratic.get(self._key(s, t), 0.0)

    def is_zero(self, tol: float = 1e-12) -> bool:
        return (
            all(abs(t.coef) <= tol for t in self.linear.values())
            and all(abs(c) <= tol for c in self.quadratic.values())
            and abs(self.identity.coef) <= tol
        )

    def is_self_adjoint(self, tol: float = 1e-12) -> bool:
        return (
            all(abs(t.coef.imag) <= tol for t in self.linear.values())
            and abs(self.identity.coef.imag) <= tol
        )

    def __str__(self) -> str:
        parts = []
        for (s, t), c in self.quadratic.items():
            if abs(c) > 0.0:
                parts.append(f"{c:.6g}·{s}^2" if s == t else f"{c:.6g}·({s}{t})")
        for name, term in self.linear.items():
            if abs(term.coef) > 0.0:
                parts.append(f"({term.coef:.6g})·{name}")
        if abs(self.identity.coef) > 0.0:
            parts.append(f"({self.identity.coef:.6g})·I")
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class CommutatorTable:
    """[Â, B̂] = iħ·{A, B}_D·Î；brackets 保存狄拉克括号常数"""
    hbar: float
    brackets: Dict[Pair, float]
    symbols: Tuple[str, ...]

    def bracket(self, a: str, b: str) -> float:
        if (a, b) in self.brackets:
            return self.brackets[(a, b)]
        return -self.brackets.get((b, a), 0.0)

    def entry(self, a: str, b: str) -> complex:
        return 1j * self.hbar * self.bracket(a, b)

    def is_antisymmetric(self) -> bool:
        return all(self.entry(a, b) == -self.entry(b, a) for a in self.symbols for b in self.symbols)

    def to_report(self) -> Dict[str, float]:
        """只列出非零项，值为 iħ 的倍数"""
        return {f"[{a},{b}]": v for (a, b), v in self.brackets.items() if v != 0.0}


def physical_symbols(system: ConstrainedSystem) -> Tuple[str, ...]:
    """去掉乘子坐标及其共轭动量后的变量"""
    hidden = set(system.multiplier_coordinates)
    hidden |= {system.space.conjugate(q) for q in system.multiplier_coordinates}
    space = system.space
    return tuple(q for q in space.positions if q not in hidden) + tuple(p for p in space.momenta if p not in hidden)


def _surface_constant(F: Poly, system: ConstrainedSystem) -> float:
    if F.is_constant():
        return F.constant_term()
    values = F.compile()(system.surface_points(16, seed=5))
    if np.ptp(values) > get_config().weak_tolerance * max(1.0, np.abs(values).max()):
        raise UnsupportedQuantisationError(f"狄拉克括号 {F} 在约束面上不是常数")
    return float(values.mean())


def build_commutator_table(system: ConstrainedSystem, hbar: float = 1.0) -> CommutatorTable:
    """由狄拉克括号建立对易子表"""
    symbols = physical_symbols(system)
    space = system.space
    brackets: Dict[Pair, float] = {}
    for i, a in enumerate(symbols):
        for b in symbols[i + 1:]:
            value = dirac_bracket(Poly.variable(space, a), Poly.variable(space, b), system)
            brackets[(a, b)] = _surface_constant(value, system)
    logger.debug(f"对易子表（iħ 的倍数）: {brackets}")
    return CommutatorTable(hbar=hbar, brackets=brackets, symbols=symbols)


def commutator(A: OperatorExpr, B: OperatorExpr, table: CommutatorTable) -> OperatorExpr:
    """[Â, B̂]，二次与二次之间不支持

    一次与二次之间用 [Â, B̂Ĉ] = [Â, B̂]Ĉ + B̂[Â, Ĉ]，
    其中 [Â, B̂] 是 Î 的倍数。
    """
    if not A.is_linear and not B.is_linear:
        raise UnsupportedOrderError("两个二次算符的对易子需要排序规则，不予支持")
    if not A.is_linear:
        return -commutator(B, A, table)

    identity = OperatorTerm(0j)
    linear: Dict[str, OperatorTerm] = {}
    for u, a_term in A.linear.items():
        for v, b_term in B.linear.items():
            identity = _merge(identity, OperatorTerm(
                a_term.coef * b_term.coef * table.entry(u, v),
                a_term.hbar_order + b_term.hbar_order + 1,
            ))
        for (s, t), q in B.quadratic.items():
            for other, c in ((t, table.entry(u, s)), (s, table.entry(u, t))):
                if c == 0:
                    continue
                linear[other] = _merge(linear.get(other), OperatorTerm(a_term.coef * q * c, a_term.hbar_order + 1))
    return OperatorExpr(linear=linear, identity=identity, alphabet=A.alphabet)


def quantize_poly(F: Poly, symbols: Sequence[str]) -> OperatorExpr:
    """把至多二次、不含共轭乘积的多项式提升为算符"""
    space = F.space
    alphabet = tuple(symbols)
    if F.degree() > 2:
        raise UnsupportedQuantisationError(f"多项式次数 {F.degree()} 超过 2")
    linear: Dict[str, OperatorTerm] = {}
    quadratic: Dict[Pair, float] = {}
    identity = OperatorTerm(0j)
    for exps, coef in F.terms.items():
        names = [n for n, k in zip(space.names, exps) for _ in range(k)]
        if any(n not in alphabet for n in names):
            raise UnsupportedQuantisationError(f"项 {names} 含非物理变量")
        if not names:
            identity = OperatorTerm(complex(coef))
        elif len(names) == 1:
            linear[names[0]] = OperatorTerm(complex(coef))
        else:
            s, t = sorted(names, key=alphabet.index)
            if s != t and space.conjugate(s) == t:
                raise UnsupportedQuantisationError(f"共轭变量乘积 {s}{t} 存在排序歧义")
            quadratic[(s, t)] = quadratic.get((s, t), 0.0) + coef
    return OperatorExpr(linear, quadratic, identity, alphabet)


def constraint_operators(system: ConstrainedSystem) -> Dict[int, OperatorExpr]:
    """第二类约束的算符 Φ̂ₗ（按标签排序）；第一类约束在规范固定后不出现"""
    symbols = physical_symbols(system)
    out = {}
    for label in system.second_class:
        expr = system.constraint(label).expr
        if expr.degree() > 1:
            raise UnsupportedQuantisationError(f"约束 {label} 不是线性的")
        out[label] = quantize_poly(expr, symbols)
    return out


def hamiltonian_operator(system: ConstrainedSystem) -> OperatorExpr:
    return quantize_poly(system.reduced_hamiltonian, physical_symbols(system))


def substitution_rules(
    system: ConstrainedSystem, keep: Sequence[str] = ("x", "Px")
) -> Dict[str, Dict[str, float]]:
    """从 Φ̂ₗ ≈ 0 解出被消去符号关于保留符号的线性表达"""
    ops = list(constraint_operators(system).values())
    symbols = physical_symbols(system)
    eliminate = [s for s in symbols if s not in keep]
    A_keep = np.array([[op.coefficient(s).real for s in keep] for op in ops])
    A_elim = np.array([[op.coefficient(s).real for s in eliminate] for op in ops])
    scale = max(1.0, np.abs(A_elim).max())
    if np.linalg.matrix_rank(A_elim, tol=get_config().rank_tolerance * scale) < len(eliminate):
        raise UnsupportedQuantisationError(f"约束不足以消去 {eliminate}")
    solution = -np.linalg.pinv(A_elim) @ A_keep
    return {
        name: {k: float(solution[i, j]) for j, k in enumerate(keep)}
        for i, name in enumerate(eliminate)
    }


def apply_substitution(expr: OperatorExpr, rules: Mapping[str, Mapping[str, float]]) -> OperatorExpr:
    """按代换规则改写算符，只在物理子空间上成立"""

    def expand(name: str) -> Dict[str, float]:
        return dict(rules[name]) if name in rules else {name: 1.0}

    keep = tuple(s for s in expr.alphabet if s not in rules)
    out = OperatorExpr(identity=expr.identity, alphabet=keep)
    for name, term in expr.linear.items():
        for k, c in expand(name).items():
            out = out + OperatorExpr(linear={k: OperatorTerm(term.coef * c, term.hbar_order)}, alphabet=keep)
    for (s, t), q in expr.quadratic.items():
        for ks, cs in expand(s).items():
            for kt, ct in expand(t).items():
                pair = (ks, kt) if keep.index(ks) <= keep.index(kt) else (kt, ks)
                out = out + OperatorExpr(quadratic={pair: q * cs * ct}, alphabet=keep)
    return out


# ----------------------------------------------------------------------
# 小球
# ----------------------------------------------------------------------
class ReducedHamiltonian(BaseModel):
    """物理子空间上 Ĥ = kinetic·P̂ₓ² + potential·x̂"""
    kinetic: float = Field(description="P̂ₓ² 的系数")
    potential: float = Field(description="x̂ 的系数")


def momentum_representation_matrix(params: BallParams) -> Tuple[np.ndarray, int]:
    """坐标表象下 P̂_j = −iħ Σ_k {q_k, P_j}_D ∂_k 的系数矩阵及其秩

    行为 (P̂ₓ, P̂_y, P̂_θ)，列为 (∂ₓ, ∂_y, ∂_θ)。
    """
    system = ball_system(params)
    table = build_commutator_table(system)
    matrix = np.array([[table.bracket(q, p) for q in PHYSICAL_POSITIONS] for p in PHYSICAL_MOMENTA])
    scale = max(1.0, np.abs(matrix).max())
    rank = int(np.linalg.matrix_rank(matrix, tol=get_config().rank_tolerance * scale))
    return matrix, rank


def physical_reduction(params: BallParams, hbar: float = 1.0) -> ReducedHamiltonian:
    """把 P̂_y、P̂_θ、ŷ、θ̂ 代换为 P̂ₓ 与 x̂ 后读出 Ĥ 的系数"""
    system = ball_system(params)
    reduced = apply_substitution(hamiltonian_operator(system), substitution_rules(system))
    return ReducedHamiltonian(
        kinetic=reduced.quadratic_coefficient("Px", "Px"),
        potential=reduced.coefficient("x").real,
    )


class CheckResult(BaseModel):
    expected: float
    actual: float
    passed: bool


class EquivalenceReport(BaseModel):
    """约束量子化与内禀量子化的逐项对照"""
    momentum_scale: float = Field(description="P̂ = momentum_scale·P̂ₓ")
    checks: Dict[str, CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())


def _check(expected: float, actual: float, rel: float = 1e-12) -> CheckResult:
    ok = math.isclose(expected, actual, rel_tol=rel, abs_tol=1e-14)
    return CheckResult(expected=expected, actual=actual, passed=ok)


def intrinsic_equivalence_check(params: BallParams, hbar: float = 1.0) -> EquivalenceReport:
    """P̂ = ((a+5)/(a+3))sec²φ·P̂ₓ 下核对 Ĥ = P̂²/(2M) − f x̂ 与 [x̂, P̂] = iħÎ"""
    scale = (params.a + 5.0) / (params.a + 3.0) * params.sec ** 2
    intrinsic = intrinsic_params(params, hbar)
    reduced = physical_reduction(params, hbar)
    table = build_commutator_table(ball_system(params), hbar)
    x_p = scale * table.entry("x", "Px")
    checks = {
        "kinetic": _check(1.0 / (2.0 * intrinsic.M), reduced.kinetic / scale ** 2),
        "potential": _check(-intrinsic.f, reduced.potential),
        "commutator_real": _check(0.0, x_p.real),
        "commutator_imag": _check(hbar, x_p.imag),
    }
    report = EquivalenceReport(momentum_scale=scale, checks=checks)
    logger.info(f"内禀量子化对照: {'通过' if report.passed else '失败'}")
    return report
