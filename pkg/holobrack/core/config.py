import os
import sys
from typing import Dict, Any, Optional

from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, Field

load_dotenv()


class Config(BaseModel):
    """全局数值与日志配置"""

    # 系统配置
    debug: bool = Field(default=False, description="调试模式")
    log_level: str = Field(default="INFO", description="日志级别")

    # 数值阈值
    zero_threshold: float = Field(
        default=1e-12,
        description="多项式系数裁剪阈值（相对于输入系数的最大模）"
    )
    weak_tolerance: float = Field(
        default=1e-10,
        description="弱等式判定时残差多项式系数的阈值"
    )
    rank_tolerance: float = Field(
        default=1e-10,
        description="秩判定的主元阈值"
    )
    surface_tolerance: float = Field(
        default=1e-9,
        description="初始点位于约束面上的容差"
    )

    # 算法配置
    max_iter: int = Field(default=10, description="Dirac-Bergmann 迭代上限")
    dt: float = Field(default=1e-3, description="RK4 默认步长（秒）")
    hbar: float = Field(default=1.0, description="约化普朗克常数")

    # 输出配置
    float_format: str = Field(default="%.12e", description="导出浮点数格式")

    @classmethod
    def from_env(cls) -> "Config":
        """从环境变量创建配置"""
        return cls(
            debug=os.getenv("HOLOBRACK_DEBUG", "false").lower() == "true",
            log_level=os.getenv("HOLOBRACK_LOG_LEVEL", "INFO"),
            zero_threshold=float(os.getenv("HOLOBRACK_ZERO_THRESHOLD", "1e-12")),
            weak_tolerance=float(os.getenv("HOLOBRACK_WEAK_TOLERANCE", "1e-10")),
            rank_tolerance=float(os.getenv("HOLOBRACK_RANK_TOLERANCE", "1e-10")),
            surface_tolerance=float(os.getenv("HOLOBRACK_SURFACE_TOLERANCE", "1e-9")),
            max_iter=int(os.getenv("HOLOBRACK_MAX_ITER", "10")),
            dt=float(os.getenv("HOLOBRACK_DT", "1e-3")),
            hbar=float(os.getenv("HOLOBRACK_HBAR", "1.0")),
        )

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


# 全局配置实例
_config: Optional[Config] = None


def get_config() -> Config:
    """获取全局配置实例（首次调用时从环境变量加载）"""
    global _config
    if _config is None:
        _config = Config.from_env()
        logger.debug(f"已从环境变量加载配置: {_config.to_dict()}")
    return _config


def set_config(config: Optional[Config]) -> None:
    """替换全局配置；传入 None 时下次访问重新从环境变量加载"""
    global _config
    _config = config


def setup_logging(level: Optional[str] = None) -> None:
    """重设 loguru 输出到 stderr"""
    logger.remove()
    logger.add(sys.stderr, level=(level or get_config().log_level).upper())
