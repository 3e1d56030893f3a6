"""结果导出：JSON 报告与 CSV 表格

两次相同配置的运行必须产生逐字节相同的文件，因此所有浮点数
先按 float_format 统一舍入，JSON 键排序。
"""
import math
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np
import orjson
from loguru import logger

from ..core.config import get_config


def _round(value: float, fmt: str) -> Optional[float]:
    if not math.isfinite(value):
        return None
    return float(fmt % value)


def normalize(obj: Any, fmt: Optional[str] = None) -> Any:
    """把报告对象转换成只含 JSON 基本类型的结构

    元组键转成 "a,b" 字符串，复数转成 {"re", "im"}，numpy 数组转成列表。
    """
    fmt = fmt or get_config().float_format
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj), fmt)
    if isinstance(obj, complex):
        return {"re": _round(obj.real, fmt), "im": _round(obj.imag, fmt)}
    if isinstance(obj, np.ndarray):
        return normalize(obj.tolist(), fmt)
    if hasattr(obj, "model_dump"):
        return normalize(obj.model_dump(), fmt)
    if isinstance(obj, dict):
        out = {}
        for key, value in obj.items():
            if isinstance(key, tuple):
                key = ",".join(str(k) for k in key)
            out[str(key)] = normalize(value, fmt)
        return out
    if isinstance(obj, (list, tuple)):
        return [normalize(v, fmt) for v in obj]
    raise TypeError(f"无法导出类型 {type(obj).__name__}")


def to_json_bytes(obj: Any, fmt: Optional[str] = None) -> bytes:
    return orjson.dumps(normalize(obj, fmt), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2) + b"\n"


def _cell(value: Any, fmt: str) -> str:
    if isinstance(value, (float, np.floating)):
        return fmt % float(value)
    return str(value)


def format_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], fmt: Optional[str] = None) -> str:
    fmt = fmt or get_config().float_format
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"行长度 {len(row)} 与表头长度 {len(header)} 不符")
        lines.append(",".join(_cell(v, fmt) for v in row))
    return "\n".join(lines) + "\n"


def write_json(path: Union[str, Path], obj: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(to_json_bytes(obj))
    logger.info(f"已写入 {path}")
    return path


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """逗号分隔、LF 换行"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(format_csv(header, rows).encode("utf-8"))
    logger.info(f"已写入 {path}")
    return path
