from numbers import Real
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.config import get_config
from ..core.exceptions import DimensionError
from .space import PhasePoint, PhaseSpace

Monomial = Tuple[int, ...]
Number = Union[int, float]


def _max_abs(terms: Mapping[Monomial, float]) -> float:
    return max((abs(c) for c in terms.values()), default=0.0)


def _prune(terms: Dict[Monomial, float], scale: float) -> Dict[Monomial, float]:
    threshold = get_config().zero_threshold * scale
    return {e: c for e, c in terms.items() if abs(c) > threshold}


class Poly:
    """相空间上的稀疏多元多项式

    terms 把长度为 2n 的指数元组（先坐标后动量）映射到实系数。
    对象构造后不可变，所有运算返回新对象；每次运算后按输入系数的
    最大模乘以 zero_threshold 裁剪小项。
    """

    __slots__ = ("space", "terms")

    def __init__(
        self,
        space: PhaseSpace,
        terms: Optional[Mapping[Monomial, float]] = None,
        scale: Optional[float] = None,
    ):
        raw: Dict[Monomial, float] = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != space.size or any(e < 0 for e in exps):
                raise DimensionError(f"指数向量 {exps} 与相空间维数 {space.size} 不符")
            raw[exps] = raw.get(exps, 0.0) + float(coef)
        if scale is None:
            scale = _max_abs(raw)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "terms", _prune(raw, scale))

    def __setattr__(self, key, value):
        raise AttributeError("Poly 不可变")

    # ------------------------------------------------------------------
    # 构造
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, space: PhaseSpace) -> "Poly":
        return cls(space, {})

    @classmethod
    def constant(cls, space: PhaseSpace, value: Number) -> "Poly":
        return cls(space, {(0,) * space.size: float(value)})

    @classmethod
    def variable(cls, space: PhaseSpace, name: str) -> "Poly":
        exps = [0] * space.size
        exps[space.index(name)] = 1
        return cls(space, {tuple(exps): 1.0})

    @classmethod
    def linear(
        cls, space: PhaseSpace, coefficients: Mapping[str, float], constant: float = 0.0
    ) -> "Poly":
        """由 {变量名: 系数} 构造一次多项式"""
        terms: Dict[Monomial, float] = {}
        if constant:
            terms[(0,) * space.size] = float(constant)
        for name, coef in coefficients.items():
            exps = [0] * space.size
            exps[space.index(name)] = 1
            key = tuple(exps)
            terms[key] = terms.get(key, 0.0) + float(coef)
        return cls(space, terms)

    # ------------------------------------------------------------------
    # 运算
    # ------------------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.space != self.space:
                raise DimensionError("两个多项式属于不同的相空间")
            return other
        if isinstance(other, Real):
            return Poly.constant(self.space, float(other))
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0.0) + c
        return Poly(self.space, terms, scale=max(self.max_abs(), other.max_abs()))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.space, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Real):
            return Poly(self.space, {e: c * float(other) for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Monomial, float] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(i + j for i, j in zip(ea, eb))
                terms[key] = terms.get(key, 0.0) + ca * cb
        return Poly(self.space, terms, scale=self.max_abs() * other.max_abs())

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if not isinstance(other, Real):
            return NotImplemented
        return self * (1.0 / float(other))

    def __pow__(self, power: int) -> "Poly":
        if not isinstance(power, int) or power < 0:
            raise ValueError(f"只支持非负整数次幂，当前为 {power}")
        result = Poly.constant(self.space, 1.0)
        for _ in range(power):
            result = result * self
        return result

    # ------------------------------------------------------------------
    # 微分与求值
    # ------------------------------------------------------------------
    def partial(self, name: str) -> "Poly":
        """对变量 name 求形式偏导"""
        i = self.space.index(name)
        terms: Dict[Monomial, float] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            key = e[:i] + (e[i] - 1,) + e[i + 1:]
            terms[key] = terms.get(key, 0.0) + c * e[i]
        return Poly(self.space, terms, scale=self.max_abs())

    def evaluate(self, point: Union[PhasePoint, Sequence[float]]) -> float:
        values = point.values if isinstance(point, PhasePoint) else np.asarray(point, dtype=float)
        if isinstance(point, PhasePoint) and point.space != self.space:
            raise DimensionError("点所属相空间与多项式不一致")
        if values.shape[0] != self.space.size:
            raise DimensionError(f"点的长度 {values.shape[0]} 与相空间维数 {self.space.size} 不符")
        total = 0.0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term *= v ** k
            total += term
        return float(total)

    def compile(self) -> Callable[[np.ndarray], np.ndarray]:
        """返回向量化求值函数，输入形状 (N, 2n) 或 (2n,)"""
        exps = np.array(list(self.terms.keys()), dtype=float)
        coefs = np.array(list(self.terms.values()), dtype=float)

        def _eval(z):
            z = np.asarray(z, dtype=float)
            if not self.terms:
                return np.zeros(z.shape[:-1])
            monomials = np.prod(z[..., None, :] ** exps, axis=-1)
            return monomials @ coefs

        return _eval

    def restrict(self, values: Mapping[str, float]) -> "Poly":
        """把若干变量替换成数值"""
        idx = {self.space.index(name): float(v) for name, v in values.items()}
        terms: Dict[Monomial, float] = {}
        for e, c in self.terms.items():
            coef = c
            key = list(e)
            for i, v in idx.items():
                if key[i]:
                    coef *= v ** key[i]
                    key[i] = 0
            key = tuple(key)
            terms[key] = terms.get(key, 0.0) + coef
        return Poly(self.space, terms, scale=self.max_abs())

    # ------------------------------------------------------------------
    # 查询
    # ------------------------------------------------------------------
    def max_abs(self) -> float:
        return _max_abs(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """总次数；零多项式返回 -1"""
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def constant_term(self) -> float:
        return self.terms.get((0,) * self.space.size, 0.0)

    def coefficient(self, exps: Iterable[int]) -> float:
        return self.terms.get(tuple(exps), 0.0)

    def linear_coefficients(self) -> Dict[str, float]:
        """一次项系数 {变量名: 系数}"""
        out: Dict[str, float] = {}
        for e, c in self.terms.items():
            if sum(e) == 1:
                out[self.space.names[e.index(1)]] = c
        return out

    def variables(self) -> set:
        used = set()
        for e in self.terms:
            used.update(self.space.names[i] for i, k in enumerate(e) if k)
        return used

    def allclose(self, other: "Poly", tol: float = 1e-12) -> bool:
        """逐项比较，tol 为相对于最大系数的容差"""
        other = self._coerce(other)
        scale = max(1.0, self.max_abs(), other.max_abs())
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol * scale for k in keys)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            factors = [
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.space.names, e) if k
            ]
            parts.append("*".join([f"{c:.6g}"] + factors))
        return " + ".join(parts)
