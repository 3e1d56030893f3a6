from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from ..core.exceptions import DimensionError, VariableNameError


@dataclass(frozen=True)
class PhaseSpace:
    """由若干正则共轭对 (q, p) 构成的相空间

    变量的排列顺序固定为：先全部坐标，再全部动量。
    """
    pairs: Tuple[Tuple[str, str], ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pairs = tuple((str(q), str(p)) for q, p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        names = [q for q, _ in pairs] + [p for _, p in pairs]
        if len(set(names)) != len(names):
            raise ValueError(f"相空间变量名重复: {names}")
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(names)})

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[str, str]]) -> "PhaseSpace":
        return cls(tuple(pairs))

    @property
    def n(self) -> int:
        """共轭对数目"""
        return len(self.pairs)

    @property
    def dimension(self) -> int:
        return self.n

    @property
    def size(self) -> int:
        """相空间总维数 2n"""
        return 2 * len(self.pairs)

    @property
    def positions(self) -> List[str]:
        return [q for q, _ in self.pairs]

    @property
    def momenta(self) -> List[str]:
        return [p for _, p in self.pairs]

    @property
    def names(self) -> List[str]:
        return self.positions + self.momenta

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise VariableNameError(f"相空间中不存在变量 {name!r}，可用变量: {self.names}") from None

    def conjugate(self, name: str) -> str:
        """返回与 name 共轭的变量名"""
        i = self.index(name)
        return self.names[(i + self.n) % self.size]

    def is_position(self, name: str) -> bool:
        return self.index(name) < self.n

    def __contains__(self, name: str) -> bool:
        return name in self._index


class PhasePoint:
    """相空间中的一个点，分量顺序与 PhaseSpace.names 一致"""

    __slots__ = ("space", "values")

    def __init__(self, space: PhaseSpace, values: Sequence[float]):
        arr = np.asarray(values, dtype=float).reshape(-1)
        if arr.shape[0] != space.size:
            raise DimensionError(f"点的长度 {arr.shape[0]} 与相空间维数 {space.size} 不符")
        self.space = space
        self.values = arr

    @classmethod
    def from_mapping(cls, space: PhaseSpace, mapping: Mapping[str, float]) -> "PhasePoint":
        """未给出的变量取 0"""
        values = np.zeros(space.size)
        for name, value in mapping.items():
            values[space.index(name)] = value
        return cls(space, values)

    def get(self, name: str) -> float:
        return float(self.values[self.space.index(name)])

    def to_dict(self) -> Dict[str, float]:
        return {name: float(v) for name, v in zip(self.space.names, self.values)}

    def __len__(self) -> int:
        return self.values.shape[0]

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v:.6g}" for k, v in self.to_dict().items())
        return f"PhasePoint({inner})"
