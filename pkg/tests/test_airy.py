import math
import os
import sys

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

# 确保项目根目录在 sys.path 中
CURRENT_DIR = os.path.dirname(os.path.abspath(__file__))
PROJECT_ROOT = os.path.dirname(CURRENT_DIR)
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from holobrack.core import DomainError
from holobrack.quantum import (
    ai,
    ai_prime,
    ai_prime_zero,
    ai_prime_zeros,
    ai_squared_tail,
    ai_zero,
    ai_zeros,
    airy_eval,
)


def _bisect(f, lo: float, hi: float, tol: float = 1e-14) -> float:
    """独立的二分法，只用 mpmath 求值"""
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sign_changes(f, start: float, count: int, step: float = 0.01):
    """从 start 向左扫描，返回前 count 个变号区间"""
    brackets = []
    u, fu = start, f(start)
    while len(brackets) < count:
        v = u - step
        fv = f(v)
        if (fu > 0) != (fv > 0):
            brackets.append((v, u))
        u, fu = v, fv
    return brackets


@pytest.fixture(scope="module")
def oracle_zeros():
    ai_mp = lambda u: float(mpmath.airyai(u))
    aip_mp = lambda u: float(mpmath.airyai(u, derivative=1))
    zeros = [_bisect(ai_mp, lo, hi) for lo, hi in _sign_changes(ai_mp, 0.0, 10)]
    prime_zeros = [_bisect(aip_mp, lo, hi) for lo, hi in _sign_changes(aip_mp, 0.0, 10)]
    return zeros, prime_zeros


@pytest.mark.airy
class TestAiryEvaluation:
    def test_wronskian(self):
        for u in np.linspace(-8.0, 8.0, 81):
            assert airy_eval(float(u)).wronskian == pytest.approx(1.0 / math.pi, rel=1e-10)

    def test_against_mpmath(self):
        for u in np.linspace(-20.0, 10.0, 61):
            value = airy_eval(float(u))
            assert value.ai == pytest.approx(float(mpmath.airyai(u)), abs=1e-10)
            assert value.ai_prime == pytest.approx(float(mpmath.airyai(u, derivative=1)), abs=1e-10)

    def test_ode_residual(self):
        h = 1e-4
        for u in np.linspace(-6.0, 4.0, 41):
            second = (ai(u + h) - 2.0 * ai(u) + ai(u - h)) / (h * h)
            assert abs(second - u * ai(u)) < 1e-6
            # Ai″ = u·Ai，用导数的差分核对
            second_from_prime = (ai_prime(u + h) - ai_prime(u - h)) / (2.0 * h)
            assert abs(second_from_prime - u * ai(u)) < 1e-7

    def test_bi_ode_residual(self):
        h = 1e-4
        for u in np.linspace(-8.0, 5.0, 53):
            value = airy_eval(float(u))
            upper, lower = airy_eval(float(u) + h), airy_eval(float(u) - h)
            # Bi″ = u·Bi
            second = (upper.bi_prime - lower.bi_prime) / (2.0 * h)
            assert abs(second - u * value.bi) <= 1e-7 * max(1.0, abs(u * value.bi))

    def test_ai_ode_residual_wide(self):
        h = 1e-4
        for u in np.linspace(-15.0, 8.0, 47):
            second = (ai_prime(u + h) - ai_prime(u - h)) / (2.0 * h)
            assert abs(second - u * ai(u)) < 1e-6

    def test_bi_monotonic(self):
        values = [airy_eval(float(u)).bi for u in np.linspace(-1.8955, 8.0, 400)]
        assert np.all(np.diff(values) > 0)
        assert all(airy_eval(float(u)).bi_prime > 0 for u in np.linspace(-1.8955, 8.0, 40))

    def test_decay_and_growth(self):
        value = airy_eval(8.0)
        assert 0.0 < value.ai < 1e-6
        assert value.bi > 1e3
        assert value.ai == pytest.approx(float(mpmath.airyai(8)), rel=1e-8)
        assert value.bi == pytest.approx(float(mpmath.airybi(8)), rel=1e-8)

    def test_reference_values(self):
        value = airy_eval(0.0)
        assert value.ai == pytest.approx(0.355028053887817, rel=1e-12)
        assert value.ai_prime == pytest.approx(-0.258819403792807, rel=1e-12)

    def test_vectorized(self):
        us = np.array([-1.0, 0.0, 1.0])
        np.testing.assert_allclose(ai(us), [float(mpmath.airyai(u)) for u in us], rtol=1e-12)

    def test_non_finite_rejected(self):
        with pytest.raises(DomainError):
            airy_eval(float("nan"))
        with pytest.raises(DomainError):
            airy_eval(float("inf"))


@pytest.mark.airy
class TestAiryZeros:
    def test_first_zeros(self):
        assert ai_zero(1) == pytest.approx(-2.338107410459767, abs=1e-12)
        assert ai_zero(2) == pytest.approx(-4.087949444130970, abs=1e-12)
        assert ai_prime_zero(1) == pytest.approx(-1.018792971647471, abs=1e-12)
        assert ai_prime_zero(2) == pytest.approx(-3.248197582179837, abs=1e-12)

    def test_against_bisection_oracle(self, oracle_zeros):
        zeros, prime_zeros = oracle_zeros
        np.testing.assert_allclose(ai_zeros(10), zeros, atol=1e-10)
        np.testing.assert_allclose(ai_prime_zeros(10), prime_zeros, atol=1e-10)

    def test_against_mpmath_zeros(self):
        for n in (1, 5, 20, 50):
            assert ai_zero(n) == pytest.approx(float(mpmath.airyaizero(n)), abs=1e-10)
            assert ai_prime_zero(n) == pytest.approx(float(mpmath.airyaizero(n, derivative=1)), abs=1e-10)

    def test_interlacing(self):
        zeros, prime_zeros = ai_zeros(10), ai_prime_zeros(10)
        assert np.all(np.diff(zeros) < 0)
        assert np.all(prime_zeros > zeros)
        assert np.all(prime_zeros[1:] < zeros[:-1])

    def test_bad_index(self):
        with pytest.raises(DomainError):
            ai_zero(0)
        with pytest.raises(DomainError):
            ai_prime_zero(-3)


@pytest.mark.airy
class TestTailIntegral:
    @pytest.mark.parametrize("u0", [-6.0, -2.338107410459767, -1.0, 0.0, 1.5])
    def test_matches_quadrature(self, u0: float):
        numeric = quad(lambda u: float(ai(u)) ** 2, u0, np.inf, limit=200)[0]
        assert ai_squared_tail(u0) == pytest.approx(numeric, abs=1e-8)

    @pytest.mark.parametrize("u0", [*(ai_zero(n) for n in range(1, 6)), *(ai_prime_zero(n) for n in range(1, 6)), 0.0, 1.0])
    def test_identity_at_reference_points(self, u0: float):
        square = lambda u: float(ai(u)) ** 2
        numeric = quad(square, max(u0, 0.0), np.inf, epsabs=1e-13, limit=400)[0]
        if u0 < 0.0:
            numeric += quad(square, u0, 0.0, epsabs=1e-13, limit=400)[0]
        assert ai_squared_tail(u0) == pytest.approx(numeric, abs=1e-9)
        if u0 < 0.0 and abs(float(ai(u0))) < 1e-12:
            assert ai_squared_tail(u0) == pytest.approx(float(ai_prime(u0)) ** 2, rel=1e-9)

    def test_at_zero_of_ai(self):
        a1 = ai_zero(1)
        assert ai_squared_tail(a1) == pytest.approx(float(ai_prime(a1)) ** 2, rel=1e-10)
