import cmath
import math
from typing import Any, Dict, List, Literal, Optional, Sequence, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import quad

from ..core.exceptions import ConsistencyError, ZeroForceError
from ..core.params import BallParams, IntrinsicParams
from .airy import ai, ai_prime, ai_prime_zero, ai_squared_tail, ai_zero

Parity = Literal["wall", "odd", "even"]
RootFamily = Literal["ai", "ai_prime"]
ArrayLike = Union[float, np.ndarray]


class Eigenpair(BaseModel):
    """线性势问题的一个能级"""
    model_config = ConfigDict(frozen=True)

    rank: int = Field(ge=1, description="按能量升序的序号")
    energy: float = Field(description="本征能量 (J)")
    parity: Parity = Field(description="wall / odd / even")
    root_family: RootFamily = Field(description="所用零点族：Ai 或 Ai′")
    root_index: int = Field(ge=1, description="零点序号 n")
    root: float = Field(description="零点值 aₙ 或 a′ₙ")
    norm_sq: float = Field(gt=0, description="归一化常数 |C|²")
    closed_form_norm_sq: Optional[float] = Field(default=None, description="楔形势的闭式 |C|²，与数值积分对照")
    series_label: int = Field(ge=1, description="按奇偶分开编号：奇态 2n−1，偶态 2n，墙问题为 n")
    params: IntrinsicParams

    @property
    def norm_const(self) -> float:
        return math.sqrt(self.norm_sq)

    def to_report(self) -> Dict[str, Any]:
        report = {
            "rank": self.rank,
            "energy": self.energy,
            "parity": self.parity,
            "root_family": self.root_family,
            "root_index": self.root_index,
            "norm_sq": self.norm_sq,
            "series_label": self.series_label,
        }
        if self.closed_form_norm_sq is not None:
            report["closed_form_norm_sq"] = self.closed_form_norm_sq
        return report


# ----------------------------------------------------------------------
# 参数
# ----------------------------------------------------------------------
def intrinsic_params(ball: BallParams, hbar: float = 1.0) -> IntrinsicParams:
    """M = m·sec²φ·(a+5)/(a+3)，f = m·g·tanφ"""
    force = ball.m * ball.g * ball.tan
    if force <= 0.0:
        raise ZeroForceError(f"有效力 f = m·g·tanφ = {force}，谱连续且无界")
    mass = ball.m * ball.sec ** 2 * (ball.a + 5.0) / (ball.a + 3.0)
    return IntrinsicParams(M=mass, f=force, hbar=hbar)


def unit_params() -> IntrinsicParams:
    """能量与长度标度都为 1：M = 1/2，f = 1，ħ = 1"""
    return IntrinsicParams(M=0.5, f=1.0, hbar=1.0)


def bouncer_params(m: float, g: float, hbar: float = 1.0) -> IntrinsicParams:
    """竖直方向的量子弹跳球：M = m，f = m·g"""
    return IntrinsicParams(M=m, f=m * g, hbar=hbar)


# ----------------------------------------------------------------------
# 谱
# ----------------------------------------------------------------------
def wall_spectrum(params: IntrinsicParams, n_max: int) -> List[Eigenpair]:
    """x ≥ 0 处为无限高墙：Eₙ = ε|aₙ|，|Cₙ|² = 1/(ℓ·Ai′(aₙ)²)"""
    if n_max < 1:
        raise ValueError(f"n_max 必须 ≥ 1，当前为 {n_max}")
    eps, ell = params.energy_scale, params.length_scale
    pairs = []
    for n in range(1, n_max + 1):
        root = ai_zero(n)
        pairs.append(Eigenpair(
            rank=n,
            energy=-eps * root,
            parity="wall",
            root_family="ai",
            root_index=n,
            root=root,
            norm_sq=1.0 / (ell * ai_squared_tail(root)),
            series_label=n,
            params=params,
        ))
    logger.info(f"墙问题前 {n_max} 个能级: {[round(p.energy, 6) for p in pairs]}")
    return pairs


def _wedge_norm_by_quadrature(params: IntrinsicParams, root: float) -> float:
    f = lambda u: float(ai(u)) ** 2
    integral = quad(f, root, 0.0, limit=200, epsabs=1e-13, epsrel=1e-12)[0] if root < 0 else 0.0
    integral += quad(f, max(root, 0.0), np.inf, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
    return 1.0 / (2.0 * params.length_scale * integral)


def wedge_spectrum(params: IntrinsicParams, n_max: int) -> List[Eigenpair]:
    """对称楔形势 f|x|：奇态来自 aₙ，偶态来自 a′ₙ，合并后按能量升序返回前 n_max 个"""
    if n_max < 1:
        raise ValueError(f"n_max 必须 ≥ 1，当前为 {n_max}")
    eps, ell = params.energy_scale, params.length_scale
    candidates = []
    for n in range(1, n_max + 1):
        for family, parity, root, label in (
            ("ai_prime", "even", ai_prime_zero(n), 2 * n),
            ("ai", "odd", ai_zero(n), 2 * n - 1),
        ):
            candidates.append((-eps * root, family, parity, n, root, label))
    candidates.sort(key=lambda item: item[0])

    pairs = []
    for rank, (energy, family, parity, n, root, label) in enumerate(candidates[:n_max], start=1):
        pairs.append(Eigenpair(
            rank=rank,
            energy=energy,
            parity=parity,
            root_family=family,
            root_index=n,
            root=root,
            norm_sq=_wedge_norm_by_quadrature(params, root),
            closed_form_norm_sq=1.0 / (2.0 * ell * ai_squared_tail(root)),
            series_label=label,
            params=params,
        ))
    logger.info(f"楔形势前 {n_max} 个能级: {[(round(p.energy, 6), p.parity) for p in pairs]}")
    return pairs


# ----------------------------------------------------------------------
# 本征态
# ----------------------------------------------------------------------
def _check_params(pair: Eigenpair, params: IntrinsicParams) -> None:
    if pair.params != params:
        raise ConsistencyError(f"本征对由参数 {pair.params} 得到，与 {params} 不一致")


def eigenstate_eval(pair: Eigenpair, params: IntrinsicParams, x: ArrayLike) -> ArrayLike:
    """Ψₙ(x)

    墙问题：x < 0 时 C·Ai(−(f x + E)/ε)，x ≥ 0 时恒为 0。
    楔形势：C·Ai((f|x| − E)/ε)，奇态在 x ≥ 0 一侧取负号。
    """
    _check_params(pair, params)
    xs = np.asarray(x, dtype=float)
    eps = params.energy_scale
    if pair.parity == "wall":
        u = -(params.f * xs + pair.energy) / eps
        psi = np.where(xs < 0.0, pair.norm_const * ai(np.where(xs < 0.0, u, 0.0)), 0.0)
    else:
        u = (params.f * np.abs(xs) - pair.energy) / eps
        psi = pair.norm_const * ai(u)
        if pair.parity == "odd":
            psi = np.where(xs >= 0.0, -psi, psi)
    return float(psi) if psi.ndim == 0 else psi


def probability_density(pair: Eigenpair, params: IntrinsicParams, x: ArrayLike) -> ArrayLike:
    psi = eigenstate_eval(pair, params, x)
    return psi * psi


def eigenstate_derivative(pair: Eigenpair, params: IntrinsicParams, x: ArrayLike) -> ArrayLike:
    """dΨ/dx 的解析式，x = 0 处取 x ≥ 0 一侧"""
    _check_params(pair, params)
    xs = np.asarray(x, dtype=float)
    eps, f = params.energy_scale, params.f
    if pair.parity == "wall":
        u = -(f * xs + pair.energy) / eps
        d = np.where(xs < 0.0, -pair.norm_const * (f / eps) * ai_prime(np.where(xs < 0.0, u, 0.0)), 0.0)
    else:
        u = (f * np.abs(xs) - pair.energy) / eps
        sign = np.where(xs >= 0.0, 1.0, -1.0)
        d = pair.norm_const * (f / eps) * sign * ai_prime(u)
        if pair.parity == "odd":
            d = np.where(xs >= 0.0, -d, d)
    return float(d) if d.ndim == 0 else d


def potential(params: IntrinsicParams, parity: Parity, x: ArrayLike) -> ArrayLike:
    xs = np.asarray(x, dtype=float)
    return -params.f * xs if parity == "wall" else params.f * np.abs(xs)


def eigen_residual(
    pair: Eigenpair, params: IntrinsicParams, xs: Sequence[float], h: Optional[float] = None
) -> float:
    """max |−(ħ²/2M)Ψ″ + VΨ − EΨ| / max |EΨ|，Ψ″ 用中心差分，步长默认 10⁻³ℓ"""
    xs = np.asarray(xs, dtype=float)
    h = 1e-3 * params.length_scale if h is None else h
    psi = eigenstate_eval(pair, params, xs)
    second = (eigenstate_eval(pair, params, xs + h) - 2.0 * psi + eigenstate_eval(pair, params, xs - h)) / (h * h)
    lhs = -(params.hbar ** 2 / (2.0 * params.M)) * second + potential(params, pair.parity, xs) * psi
    scale = np.abs(pair.energy * psi).max()
    return float(np.abs(lhs - pair.energy * psi).max() / scale)


def norm_integral(pair: Eigenpair, params: IntrinsicParams) -> float:
    """∫|Ψ|² dx，数值积分"""
    _check_params(pair, params)
    turning = pair.energy / params.f
    tail = 40.0 * params.length_scale
    f = lambda x: float(probability_density(pair, params, x))
    total = quad(f, -turning - tail, -turning, limit=200)[0] + quad(f, -turning, 0.0, limit=200)[0]
    if pair.parity != "wall":
        total += quad(f, 0.0, turning, limit=200)[0] + quad(f, turning, turning + tail, limit=200)[0]
    return total


def overlap(first: Eigenpair, second: Eigenpair, params: IntrinsicParams) -> float:
    """∫Ψₘ Ψₙ dx"""
    _check_params(first, params)
    _check_params(second, params)
    reach = max(first.energy, second.energy) / params.f + 40.0 * params.length_scale
    f = lambda x: float(eigenstate_eval(first, params, x) * eigenstate_eval(second, params, x))
    total = quad(f, -reach, 0.0, limit=400)[0]
    if first.parity != "wall":
        total += quad(f, 0.0, reach, limit=400)[0]
    return total


def time_phase(pair: Eigenpair, t: float, t0: float = 0.0) -> complex:
    """Λ(t) = exp(−iE(t − t0)/ħ)，Λ₀ = 1"""
    return cmath.exp(-1j * pair.energy * (t - t0) / pair.params.hbar)


def sample_wavefunction(pair: Eigenpair, params: IntrinsicParams, xs: Sequence[float]) -> List[List[float]]:
    """(x, ψ, |ψ|²) 行"""
    xs = np.asarray(xs, dtype=float)
    psi = np.asarray(eigenstate_eval(pair, params, xs), dtype=float).reshape(-1)
    return [[float(x), float(p), float(p * p)] for x, p in zip(xs, psi)]


def spectrum_report(pairs: Sequence[Eigenpair]) -> List[Dict[str, Any]]:
    return [pair.to_report() for pair in sorted(pairs, key=lambda p: p.rank)]
