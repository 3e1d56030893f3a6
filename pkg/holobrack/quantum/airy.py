import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import brentq
from scipy.special import airy

from ..core.exceptions import DomainError


@dataclass(frozen=True)
class AiryValue:
    """Ai、Bi 及其导数在 u 处的值"""
    u: float
    ai: float
    ai_prime: float
    bi: float
    bi_prime: float

    @property
    def wronskian(self) -> float:
        """Ai·Bi′ − Ai′·Bi，理论值 1/π"""
        return self.ai * self.bi_prime - self.ai_prime * self.bi


def airy_eval(u: float) -> AiryValue:
    if not math.isfinite(u):
        raise DomainError(f"Airy 函数的参数必须有限，当前为 {u}")
    ai, aip, bi, bip = airy(float(u))
    return AiryValue(float(u), float(ai), float(aip), float(bi), float(bip))


def ai(u):
    """Ai(u)，支持 numpy 数组"""
    return airy(u)[0]


def ai_prime(u):
    return airy(u)[1]


def _zero_guess(n: int, derivative: bool) -> float:
    k = 4 * n - 3 if derivative else 4 * n - 1
    return -(3.0 * math.pi * k / 8.0) ** (2.0 / 3.0)


def _refine(f: Callable[[float], float], df: Callable[[float], float], guess: float) -> float:
    """在渐近估计附近找变号区间，brentq 求根后做一步受区间保护的牛顿修正"""
    half = 0.25 * math.pi / math.sqrt(abs(guess))
    lo, hi = guess - half, min(guess + half, 0.0)
    for _ in range(50):
        if f(lo) * f(hi) < 0:
            break
        half *= 1.5
        lo, hi = guess - half, min(guess + half, 0.0)
    else:
        raise DomainError(f"在 {guess} 附近找不到变号区间")
    root = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    slope = df(root)
    if slope != 0.0:
        polished = root - f(root) / slope
        if lo < polished < hi and abs(f(polished)) <= abs(f(root)):
            root = polished
    return float(root)


def _check_index(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"零点序号必须是正整数，当前为 {n}")


@lru_cache(maxsize=256)
def ai_zero(n: int) -> float:
    """Ai 的第 n 个零点 aₙ（负实轴上按模递增）"""
    _check_index(n)
    return _refine(
        lambda u: airy(u)[0],
        lambda u: airy(u)[1],
        _zero_guess(int(n), derivative=False),
    )


@lru_cache(maxsize=256)
def ai_prime_zero(n: int) -> float:
    """Ai′ 的第 n 个零点 a′ₙ；Ai″ = u·Ai"""
    _check_index(n)
    return _refine(
        lambda u: airy(u)[1],
        lambda u: u * airy(u)[0],
        _zero_guess(int(n), derivative=True),
    )


def ai_zeros(count: int) -> np.ndarray:
    return np.array([ai_zero(n) for n in range(1, count + 1)])


def ai_prime_zeros(count: int) -> np.ndarray:
    return np.array([ai_prime_zero(n) for n in range(1, count + 1)])


def ai_squared_tail(u0: float) -> float:
    """∫_{u0}^∞ Ai(u)² du = −u0·Ai(u0)² + Ai′(u0)²"""
    value = airy_eval(u0)
    return -u0 * value.ai ** 2 + value.ai_prime ** 2
