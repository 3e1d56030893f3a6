import math
from typing import Dict, Any

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class BallParams(BaseModel):
    """斜面上滚动小球的物理参数"""
    model_config = ConfigDict(frozen=True)

    m: float = Field(default=1.0, gt=0, description="质量 (kg)")
    g: float = Field(default=9.8, ge=0, description="重力加速度 (m/s²)")
    R: float = Field(default=1.0, gt=0, description="半径 (m)")
    phi: float = Field(default=math.pi / 4, description="斜面倾角 (rad)")
    a: float = Field(default=2.0, ge=0, description="形状参数：0 空心球，2 实心球")

    @field_validator("phi")
    @classmethod
    def _check_phi(cls, value: float) -> float:
        if not (0.0 <= value < math.pi / 2):
            raise ValueError(f"倾角 phi 必须位于 [0, π/2) 内，当前为 {value}")
        return value

    @model_validator(mode="after")
    def _warn_unusual(self) -> "BallParams":
        if self.a not in (0.0, 2.0):
            logger.warning(f"形状参数 a={self.a} 既不是空心球(0)也不是实心球(2)")
        if self.phi == 0.0:
            logger.warning("倾角 phi=0：水平面上没有驱动力")
        return self

    @property
    def tan(self) -> float:
        return math.tan(self.phi)

    @property
    def sec(self) -> float:
        return 1.0 / math.cos(self.phi)

    @property
    def inertia_factor(self) -> float:
        """转动惯量 I = 2mR²/(a+3)"""
        return 2.0 * self.m * self.R ** 2 / (self.a + 3.0)

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


class IntrinsicParams(BaseModel):
    """内禀一维描述的参数：有效质量 M、有效力 f、ħ"""
    model_config = ConfigDict(frozen=True)

    M: float = Field(gt=0, description="有效质量 (kg)")
    f: float = Field(gt=0, description="有效力 (N)")
    hbar: float = Field(default=1.0, gt=0, description="约化普朗克常数 (J·s)")

    @property
    def energy_scale(self) -> float:
        """ε = (ħ²f²/2M)^{1/3}"""
        return (self.hbar ** 2 * self.f ** 2 / (2.0 * self.M)) ** (1.0 / 3.0)

    @property
    def length_scale(self) -> float:
        """ℓ = (ħ²/2Mf)^{1/3}"""
        return (self.hbar ** 2 / (2.0 * self.M * self.f)) ** (1.0 / 3.0)

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()
