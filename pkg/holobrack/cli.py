"""命令行入口

    holobrack classical --t-end 2 --out out/classical.csv
    holobrack brackets --a 2 --phi 0.5236
    holobrack spectrum-wall --unit-scale -n 4
    holobrack spectrum-wedge -n 6 --out out/wedge.json
    holobrack wavefunction --potential wedge --level 2
    holobrack quantize

退出码：0 全部校验通过，1 有校验失败，2 配置错误或领域错误。
"""
import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
import orjson
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .core import BallParams, ConfigurationError, HolobrackError, IntrinsicParams, setup_logging
from .dynamics import accelerations, initial_state, integrate, intrinsic_acceleration
from .mechanics import ConstrainedSystem, ball_system, dirac_bracket_table
from .mechanics.ball import (
    PHYSICAL_MOMENTA,
    PHYSICAL_POSITIONS,
    dirac_table_closed_form,
    expected_constraints,
    multiplier_closed_form,
    theta_a_closed_form,
    theta_a_inverse_closed_form,
)
from .quantum import (
    Eigenpair,
    build_commutator_table,
    commutator,
    constraint_operators,
    eigen_residual,
    hamiltonian_operator,
    intrinsic_equivalence_check,
    intrinsic_params,
    momentum_representation_matrix,
    norm_integral,
    overlap,
    physical_reduction,
    sample_wavefunction,
    spectrum_report,
    unit_params,
    wall_spectrum,
    wedge_spectrum,
)
from .quantum.operators import CheckResult
from .utils import format_csv, to_json_bytes, write_csv, write_json

Scenario = Literal["classical", "brackets", "spectrum-wall", "spectrum-wedge", "wavefunction", "quantize"]
SCENARIOS: Tuple[str, ...] = Scenario.__args__
CSV_SCENARIOS = ("classical", "wavefunction")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2


class RunConfig(BaseModel):
    """一次运行的完整配置，可由 JSON 文件给出，命令行参数覆盖文件中的值"""
    model_config = ConfigDict(extra="forbid")

    scenario: Scenario
    ball: BallParams = Field(default_factory=BallParams)
    hbar: float = Field(default=1.0, gt=0, description="约化普朗克常数")
    unit_scale: bool = Field(default=False, description="取 ε = ℓ = 1 的单位制")
    n_max: int = Field(default=6, ge=1, description="能级个数")
    t_end: float = Field(default=2.0, ge=0, description="积分终止时间 (s)")
    dt: float = Field(default=1e-3, gt=0, description="RK4 步长 (s)")
    x0: float = Field(default=0.0, description="初始位置")
    v0: float = Field(default=0.0, description="初始速度")
    level: int = Field(default=1, ge=1, description="wavefunction 场景的能级序号")
    potential: Literal["wall", "wedge"] = Field(default="wall", description="wavefunction 场景的势")
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    points: int = Field(default=201, ge=2, description="波函数采样点数")
    out: Optional[Path] = Field(default=None, description="输出文件，缺省写到标准输出")
    format: Optional[Literal["json", "csv"]] = None

    @model_validator(mode="after")
    def _check_scenario(self) -> "RunConfig":
        if self.format == "csv" and self.scenario not in CSV_SCENARIOS:
            raise ValueError(f"场景 {self.scenario} 只支持 JSON 输出")
        if self.x_min is not None and self.x_max is not None and self.x_min >= self.x_max:
            raise ValueError(f"需要 x_min < x_max，当前为 {self.x_min} ≥ {self.x_max}")
        return self

    @property
    def output_format(self) -> str:
        if self.format:
            return self.format
        return "csv" if self.scenario in CSV_SCENARIOS else "json"

    def intrinsic(self) -> IntrinsicParams:
        return unit_params() if self.unit_scale else intrinsic_params(self.ball, self.hbar)


@dataclass
class ScenarioResult:
    report: Dict[str, Any]
    checks: Dict[str, CheckResult] = field(default_factory=dict)
    table: Optional[Tuple[List[str], List[List[float]]]] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def payload(self) -> Dict[str, Any]:
        """JSON 外层对象：场景数据、checks 与 passed"""
        return {**self.report, "checks": self.checks, "passed": self.passed}


def _close(actual: float, expected: float, rel: float, abs_tol: float = 1e-12) -> CheckResult:
    ok = math.isclose(actual, expected, rel_tol=rel, abs_tol=abs_tol)
    return CheckResult(expected=expected, actual=actual, passed=ok)


def _below(actual: float, limit: float) -> CheckResult:
    return CheckResult(expected=limit, actual=actual, passed=actual < limit)


def _flag(ok: bool) -> CheckResult:
    return CheckResult(expected=1.0, actual=1.0 if ok else 0.0, passed=ok)


def _constraint_report(system: ConstrainedSystem) -> List[Dict[str, Any]]:
    return [
        {"label": c.label, "stage": c.stage_name, "class": c.cls, "expr": repr(c.expr), "multiplier": c.multiplier}
        for c in system.constraints
    ]


def _multiplier_report(system: ConstrainedSystem) -> Dict[str, Any]:
    return {
        str(label): {"name": sol.name, "status": sol.status, "value": sol.surface_value()}
        for label, sol in system.multipliers.items()
    }


# ----------------------------------------------------------------------
# 场景
# ----------------------------------------------------------------------
def _classical(config: RunConfig) -> ScenarioResult:
    ball = config.ball
    system = ball_system(ball)
    checks: Dict[str, CheckResult] = {}

    expected = expected_constraints(ball)
    checks["constraint_labels"] = _flag(system.labels == sorted(expected))
    if system.labels == sorted(expected):
        mismatch = max((system.constraint(l).expr - expected[l]).max_abs() for l in expected)
        checks["constraint_forms"] = _below(mismatch, 1e-10)
        checks["primary_labels"] = _flag([c.label for c in system.constraints if c.is_primary] == [3, 4])
        checks["discovery_stages"] = _flag(
            [system.constraint(l).stage for l in (1, 2, 5, 6)] == [1, 1, 2, 2]
        )
        chi1, chi2 = multiplier_closed_form(ball)
        checks["chi1"] = _close(system.multipliers[1].surface_value(), chi1, 1e-10)
        checks["chi2"] = _close(system.multipliers[2].surface_value(), chi2, 1e-10)
        checks["multiplier_status"] = _flag(
            [system.multipliers[l].status for l in (3, 4, 5, 6)] == ["free", "free", "zero_on_surface", "zero_on_surface"]
        )

    acc = accelerations(system, PHYSICAL_POSITIONS)
    target = intrinsic_acceleration(ball)
    checks["acceleration_x"] = _close(acc["x"], target, 1e-9)
    checks["ratio_y"] = _close(acc["y"], -ball.tan * acc["x"], 1e-6)
    checks["ratio_theta"] = _close(acc["theta"], ball.sec * acc["x"] / ball.R, 1e-6)

    traj = integrate(system, initial_state(system, ball, config.x0, config.v0), config.t_end, config.dt)
    drift = max(traj.drift.values(), default=0.0)
    energy_drift = float(np.abs(traj.energy - traj.energy[0]).max())
    checks["constraint_drift"] = _below(drift, 1e-6)
    checks["energy_drift"] = _below(energy_drift, 1e-6 * max(1.0, abs(float(traj.energy[0]))))

    report = {
        "scenario": "classical",
        "params": ball.to_dict(),
        "iterations": system.iterations,
        "constraints": _constraint_report(system),
        "multipliers": _multiplier_report(system),
        "accelerations": acc,
        "intrinsic_acceleration": target,
        "steps": len(traj) - 1,
        "drift": {str(k): v for k, v in traj.drift.items()},
        "energy_drift": energy_drift,
        "final": traj.final().to_dict(),
    }
    return ScenarioResult(report, checks, (traj.header(), traj.rows()))


def _brackets(config: RunConfig) -> ScenarioResult:
    ball = config.ball
    system = ball_system(ball)
    theta = system.theta
    checks: Dict[str, CheckResult] = {
        "theta_antisymmetric": _flag(theta.is_antisymmetric()),
        "theta_rank": _close(float(theta.rank or 0), 4.0, 0.0),
        "theta_zero_rows": _flag(list(theta.zero_rows) == [3, 4]),
    }
    theta_a = theta.submatrix([5, 6], [1, 2])
    theta_a_inv = np.linalg.inv(theta_a)
    checks["theta_a"] = _below(float(np.abs(theta_a - theta_a_closed_form(ball)).max()), 1e-12)
    checks["theta_a_inverse"] = _below(float(np.abs(theta_a_inv - theta_a_inverse_closed_form(ball)).max()), 1e-12)

    table = dirac_bracket_table(system, PHYSICAL_POSITIONS + PHYSICAL_MOMENTA, PHYSICAL_POSITIONS + PHYSICAL_MOMENTA)
    values = {key: poly.constant_term() for key, poly in table.items()}
    closed = dirac_table_closed_form(ball)
    nonconstant = [key for key, poly in table.items() if not poly.is_constant()]
    checks["dirac_constant"] = _flag(not nonconstant)
    worst = 0.0
    for key, value in values.items():
        a, b = key
        if key in closed:
            target = closed[key]
        elif (b, a) in closed:
            target = -closed[(b, a)]
        else:
            target = 0.0
        worst = max(worst, abs(value - target))
    checks["dirac_table"] = _below(worst, 1e-10)

    report = {
        "scenario": "brackets",
        "params": ball.to_dict(),
        "theta": {"labels": list(theta.labels), "entries": theta.entries, "rank": theta.rank},
        "theta_a": theta_a,
        "theta_a_inverse": theta_a_inv,
        "multipliers": _multiplier_report(system),
        "dirac": {key: v for key, v in values.items() if v != 0.0},
    }
    return ScenarioResult(report, checks)


def _interior_grid(pair: Eigenpair, params: IntrinsicParams, count: int = 200) -> np.ndarray:
    """远离 x = 0 的网格，避开楔形尖点与墙"""
    reach = pair.energy / params.f + 4.0 * params.length_scale
    left = np.linspace(-reach, -0.01 * params.length_scale, count)
    return left if pair.parity == "wall" else np.concatenate([left, -left[::-1]])


def _spectrum(config: RunConfig, potential: str) -> ScenarioResult:
    params = config.intrinsic()
    pairs = wall_spectrum(params, config.n_max) if potential == "wall" else wedge_spectrum(params, config.n_max)
    checks: Dict[str, CheckResult] = {}
    for pair in pairs:
        checks[f"residual_{pair.rank}"] = _below(eigen_residual(pair, params, _interior_grid(pair, params)), 1e-5)
        checks[f"norm_{pair.rank}"] = _close(norm_integral(pair, params), 1.0, 0.0, 1e-6)
    head = pairs[:6]
    worst = max((abs(overlap(p, q, params)) for i, p in enumerate(head) for q in head[i + 1:]), default=0.0)
    checks["orthogonality"] = _below(worst, 1e-6)
    if potential == "wedge":
        checks["ground_even"] = _flag(pairs[0].parity == "even")
        walls = wall_spectrum(params, config.n_max)
        odd = [p.energy for p in pairs if p.parity == "odd"]
        worst_odd = max((abs(e - w.energy) / w.energy for e, w in zip(odd, walls)), default=0.0)
        checks["odd_match_wall"] = _below(worst_odd, 1e-12)

    report = {
        "scenario": f"spectrum-{potential}",
        "intrinsic": params.to_dict(),
        "energy_scale": params.energy_scale,
        "length_scale": params.length_scale,
        "levels": spectrum_report(pairs),
    }
    return ScenarioResult(report, checks)


def _wavefunction(config: RunConfig) -> ScenarioResult:
    params = config.intrinsic()
    n = max(config.n_max, config.level)
    pairs = wall_spectrum(params, n) if config.potential == "wall" else wedge_spectrum(params, n)
    pair = pairs[config.level - 1]
    reach = pair.energy / params.f + 6.0 * params.length_scale
    x_min = config.x_min if config.x_min is not None else -reach
    x_max = config.x_max if config.x_max is not None else (0.0 if config.potential == "wall" else reach)
    rows = sample_wavefunction(pair, params, np.linspace(x_min, x_max, config.points))
    checks = {"norm": _close(norm_integral(pair, params), 1.0, 0.0, 1e-6)}
    report = {
        "scenario": "wavefunction",
        "level": pair.to_report(),
        "intrinsic": params.to_dict(),
        "samples": [{"x": x, "psi": p, "density": d} for x, p, d in rows],
    }
    return ScenarioResult(report, checks, (["x", "psi", "density"], rows))


def _quantize(config: RunConfig) -> ScenarioResult:
    ball, hbar = config.ball, config.hbar
    system = ball_system(ball)
    table = build_commutator_table(system, hbar)
    checks: Dict[str, CheckResult] = {}

    closed = dirac_table_closed_form(ball)
    worst = max(abs(table.entry(a, b) - 1j * hbar * value) for (a, b), value in closed.items())
    checks["commutator_table"] = _below(worst, 1e-10)
    checks["commutator_antisymmetric"] = _flag(table.is_antisymmetric())

    H = hamiltonian_operator(system)
    ops = constraint_operators(system)
    scale = max(1.0, ball.m * ball.g) * hbar
    for label, op in ops.items():
        checks[f"constraint_{label}_conserved"] = _flag(commutator(op, H, table).is_zero(1e-9 * scale))

    matrix, rank = momentum_representation_matrix(ball)
    checks["momentum_rank"] = _close(float(rank), 1.0, 0.0)
    checks["momentum_row_y"] = _below(float(np.abs(matrix[1] + ball.tan * matrix[0]).max()), 1e-12)
    ratio = 2.0 * ball.R * ball.sec / (ball.a + 3.0)
    checks["momentum_row_theta"] = _below(float(np.abs(matrix[2] - ratio * matrix[0]).max()), 1e-12)

    reduced = physical_reduction(ball, hbar)
    kinetic = ball.sec ** 2 / (2.0 * ball.m) * (ball.a + 5.0) / (ball.a + 3.0)
    checks["reduced_kinetic"] = _close(reduced.kinetic, kinetic, 1e-12)
    checks["reduced_potential"] = _close(reduced.potential, -ball.m * ball.g * ball.tan, 1e-12)

    equivalence = intrinsic_equivalence_check(ball, hbar)
    for name, check in equivalence.checks.items():
        checks[f"intrinsic_{name}"] = check

    report = {
        "scenario": "quantize",
        "params": ball.to_dict(),
        "hbar": hbar,
        "commutators": table.to_report(),
        "constraint_operators": {str(k): str(v) for k, v in ops.items()},
        "hamiltonian": str(H),
        "momentum_matrix": matrix,
        "momentum_rank": rank,
        "reduced": reduced,
        "momentum_scale": equivalence.momentum_scale,
    }
    return ScenarioResult(report, checks)


def run_scenario(config: RunConfig) -> ScenarioResult:
    if config.scenario == "classical":
        return _classical(config)
    if config.scenario == "brackets":
        return _brackets(config)
    if config.scenario == "spectrum-wall":
        return _spectrum(config, "wall")
    if config.scenario == "spectrum-wedge":
        return _spectrum(config, "wedge")
    if config.scenario == "wavefunction":
        return _wavefunction(config)
    return _quantize(config)


def render(config: RunConfig, result: ScenarioResult) -> bytes:
    if config.output_format == "csv":
        header, rows = result.table
        return format_csv(header, rows).encode("utf-8")
    return to_json_bytes(result.payload())


def run(config: RunConfig) -> int:
    """执行一个场景并写出结果，返回退出码"""
    result = run_scenario(config)
    if config.out is None:
        sys.stdout.buffer.write(render(config, result))
        sys.stdout.flush()
    elif config.output_format == "csv":
        header, rows = result.table
        write_csv(config.out, header, rows)
        write_json(config.out.with_suffix(".report.json"), result.payload())
    else:
        write_json(config.out, result.payload())

    failed = [name for name, check in result.checks.items() if not check.passed]
    if failed:
        logger.error(f"场景 {config.scenario} 校验失败: {failed}")
        return EXIT_CHECK_FAILED
    logger.info(f"场景 {config.scenario} 全部 {len(result.checks)} 项校验通过")
    return EXIT_OK


# ----------------------------------------------------------------------
# 参数解析
# ----------------------------------------------------------------------
BALL_FLAGS = ("a", "m", "g", "R", "phi")
RUN_FLAGS = (
    "hbar", "unit_scale", "n_max", "t_end", "dt", "x0", "v0",
    "level", "potential", "x_min", "x_max", "points", "out", "format",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holobrack", description="约束哈密顿系统与线性势量子谱")
    parser.add_argument("scenario", choices=SCENARIOS, help="运行场景")
    parser.add_argument("--config", type=Path, help="JSON 配置文件，命令行参数优先")

    ball = parser.add_argument_group("小球参数")
    ball.add_argument("--a", type=float, help="形状参数（0 空心球，2 实心球）")
    ball.add_argument("--m", type=float, help="质量")
    ball.add_argument("--g", type=float, help="重力加速度")
    ball.add_argument("--R", type=float, help="半径")
    ball.add_argument("--phi", type=float, help="斜面倾角（弧度）")

    parser.add_argument("--hbar", type=float, help="约化普朗克常数")
    parser.add_argument("--unit-scale", action="store_true", default=None, help="取 ε = ℓ = 1")
    parser.add_argument("-n", "--n-max", type=int, help="能级个数")
    parser.add_argument("--t-end", type=float, help="积分终止时间")
    parser.add_argument("--dt", type=float, help="RK4 步长")
    parser.add_argument("--x0", type=float, help="初始位置")
    parser.add_argument("--v0", type=float, help="初始速度")
    parser.add_argument("--level", type=int, help="wavefunction 场景的能级序号")
    parser.add_argument("--potential", choices=("wall", "wedge"), help="wavefunction 场景的势")
    parser.add_argument("--x-min", type=float, help="采样区间左端")
    parser.add_argument("--x-max", type=float, help="采样区间右端")
    parser.add_argument("--points", type=int, help="采样点数")
    parser.add_argument("--out", type=Path, help="输出文件")
    parser.add_argument("--format", choices=("json", "csv"), help="输出格式")
    parser.add_argument("--log-level", default=None, help="日志级别")
    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """合并配置文件与命令行参数"""
    data: Dict[str, Any] = {}
    if args.config is not None:
        try:
            data = orjson.loads(Path(args.config).read_bytes())
        except (OSError, orjson.JSONDecodeError) as e:
            raise ConfigurationError(f"无法读取配置文件 {args.config}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"配置文件 {args.config} 顶层必须是对象")

    ball = dict(data.get("ball") or {})
    for name in BALL_FLAGS:
        value = getattr(args, name)
        if value is not None:
            ball[name] = value
    data["ball"] = ball
    for name in RUN_FLAGS:
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    data["scenario"] = args.scenario
    return RunConfig.model_validate(data)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        config = load_run_config(args)
        return run(config)
    except ValidationError as e:
        logger.error(f"配置无效: {e}")
        return EXIT_ERROR
    except HolobrackError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
