import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
from loguru import logger

from ..algebra import PhasePoint, PhaseSpace
from ..core.config import get_config
from ..core.exceptions import OffSurfaceError
from ..mechanics import ConstrainedSystem
from ..mechanics.surface import linear_system
from .eom import VectorField, eom_vector_field


@dataclass
class Trajectory:
    """数值轨道

    Attributes:
        space: 相空间
        times: 严格递增的时间 (s)
        states: 形状 (N, 2n) 的状态
        labels: 约束标签
        residuals: 形状 (N, m)，每个状态处各约束的取值
        energy: 每个状态处的正则哈密顿量
    """
    space: PhaseSpace
    times: np.ndarray
    states: np.ndarray
    labels: List[int] = field(default_factory=list)
    residuals: Optional[np.ndarray] = None
    energy: Optional[np.ndarray] = None

    @property
    def drift(self) -> Dict[int, float]:
        """每个约束在整条轨道上的最大 |Φ|"""
        if self.residuals is None or not self.labels:
            return {}
        return {label: float(np.abs(self.residuals[:, j]).max()) for j, label in enumerate(self.labels)}

    @property
    def points(self) -> List[PhasePoint]:
        return [PhasePoint(self.space, row) for row in self.states]

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self.space.index(name)]

    def final(self) -> PhasePoint:
        return PhasePoint(self.space, self.states[-1])

    def header(self) -> List[str]:
        return ["t"] + self.space.names + [f"Phi{label}" for label in self.labels]

    def rows(self) -> List[List[float]]:
        out = []
        for k, t in enumerate(self.times):
            row = [float(t)] + self.states[k].tolist()
            if self.residuals is not None:
                row += self.residuals[k].tolist()
            out.append(row)
        return out

    def __len__(self) -> int:
        return len(self.times)


def rk4_step(f: Callable[[np.ndarray], np.ndarray], z: np.ndarray, h: float) -> np.ndarray:
    k1 = f(z)
    k2 = f(z + 0.5 * h * k1)
    k3 = f(z + 0.5 * h * k2)
    k4 = f(z + h * k3)
    return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _projector(system: ConstrainedSystem) -> Callable[[np.ndarray], np.ndarray]:
    A, b = linear_system(system.exprs, system.space)
    pinv = np.linalg.pinv(A)

    def project(z: np.ndarray) -> np.ndarray:
        return z - pinv @ (A @ z + b)

    return project


def integrate(
    system: ConstrainedSystem,
    pt0: PhasePoint,
    t_end: float,
    dt: Optional[float] = None,
    project: bool = False,
    vector_field: Optional[VectorField] = None,
) -> Trajectory:
    """经典四阶 Runge-Kutta 积分，记录约束漂移与能量

    Args:
        system: 约束系统
        pt0: 初始点，须满足 |Φ(pt0)| < surface_tolerance
        t_end: 终止时间，0 时只返回初始点
        dt: 步长，默认取配置 dt；最后一步缩短到 t_end
        project: 每步后把状态投影回约束面（默认关闭）
        vector_field: 可复用的向量场

    Returns:
        Trajectory: 数值轨道
    """
    config = get_config()
    dt = config.dt if dt is None else dt
    if t_end < 0 or dt <= 0:
        raise ValueError(f"需要 t_end ≥ 0 且 dt > 0，当前 t_end={t_end}, dt={dt}")

    exprs = system.exprs
    constraint_fns = [p.compile() for p in exprs]
    z0 = np.array(pt0.values, dtype=float)
    for c, fn in zip(system.constraints, constraint_fns):
        value = float(fn(z0))
        if abs(value) >= config.surface_tolerance:
            raise OffSurfaceError(f"初始点不在约束面上：Φ{c.label} = {value:.3e}")

    vector_field = vector_field or eom_vector_field(system)
    projector = _projector(system) if project and exprs else None

    n_steps = int(math.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0
    times = [min(k * dt, float(t_end)) for k in range(n_steps + 1)]
    states = [z0]
    z = z0
    for k in range(n_steps):
        z = rk4_step(vector_field, z, times[k + 1] - times[k])
        if projector is not None:
            z = projector(z)
        states.append(z)

    states_arr = np.vstack(states)
    residuals = np.column_stack([fn(states_arr) for fn in constraint_fns]) if exprs else None
    energy = system.hamiltonian.compile()(states_arr)
    traj = Trajectory(
        space=system.space,
        times=np.asarray(times),
        states=states_arr,
        labels=system.labels,
        residuals=residuals,
        energy=np.asarray(energy),
    )
    if traj.drift:
        logger.info(f"积分完成：{len(traj)} 个状态，最大约束漂移 {max(traj.drift.values()):.3e}")
    return traj
