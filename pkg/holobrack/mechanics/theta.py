from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..algebra import PhaseSpace, Poly, poisson_bracket
from ..core.config import get_config
from ..core.exceptions import DegenerateConstraintError


@dataclass(frozen=True)
class ThetaBlock:
    """Θ 非零部分的一个连通块，rows/cols 为约束标签"""
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    matrix: np.ndarray
    inverse: Optional[np.ndarray]

    @property
    def invertible(self) -> bool:
        return self.inverse is not None


@dataclass(frozen=True)
class ThetaMatrix:
    """约束两两泊松括号构成的反对称矩阵 Θ_{jl} = {Φ_j, Φ_l}

    constant 为 False 时 entries 中非常数位置为 NaN，不做分块求逆。
    """
    labels: Tuple[int, ...]
    polys: Tuple[Tuple[Poly, ...], ...]
    entries: np.ndarray
    constant: bool
    rank: Optional[int]
    zero_rows: Tuple[int, ...]
    blocks: Tuple[ThetaBlock, ...]

    def _pos(self, label: int) -> int:
        return self.labels.index(label)

    def entry(self, j: int, l: int) -> float:
        return float(self.entries[self._pos(j), self._pos(l)])

    def submatrix(self, rows: Sequence[int], cols: Optional[Sequence[int]] = None) -> np.ndarray:
        cols = rows if cols is None else cols
        return self.entries[np.ix_([self._pos(r) for r in rows], [self._pos(c) for c in cols])]

    def block(self, rows: Sequence[int]) -> ThetaBlock:
        rows = tuple(rows)
        for blk in self.blocks:
            if blk.rows == rows:
                return blk
        raise KeyError(f"Θ 中不存在行标签为 {rows} 的块")

    def is_antisymmetric(self) -> bool:
        return self.constant and bool(np.array_equal(self.entries, -self.entries.T))

    def inverse_over(self, labels: Sequence[int]) -> np.ndarray:
        """Θ 限制到给定标签上的逆矩阵"""
        if not labels:
            return np.zeros((0, 0))
        if not self.constant:
            raise DegenerateConstraintError("Θ 含非常数元素，拒绝求逆")
        sub = self.submatrix(labels)
        scale = max(1.0, np.abs(sub).max())
        if np.linalg.matrix_rank(sub, tol=get_config().rank_tolerance * scale) < len(labels):
            raise DegenerateConstraintError(f"约束 {list(labels)} 的 Θ 子块奇异")
        return np.linalg.inv(sub)


def _components(nonzero: np.ndarray) -> List[Tuple[List[int], List[int]]]:
    """行、列作为二部图的结点，按非零元素合并连通分量"""
    m = nonzero.shape[0]
    parent = list(range(2 * m))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for j, l in zip(*np.nonzero(nonzero)):
        parent[find(int(j))] = find(m + int(l))

    groups: Dict[int, Tuple[List[int], List[int]]] = {}
    for j in range(m):
        if nonzero[j].any():
            groups.setdefault(find(j), ([], []))[0].append(j)
    for l in range(m):
        if nonzero[:, l].any():
            groups.setdefault(find(m + l), ([], []))[1].append(l)
    return sorted(groups.values(), key=lambda g: min(g[0]))


def theta_matrix(constraints: Sequence, space: Optional[PhaseSpace] = None) -> ThetaMatrix:
    """计算 Θ 矩阵及其可逆分块

    :param constraints: Constraint 序列（或带 label/expr 的对象）
    :param space: 可选，用于校验
    :return: ThetaMatrix
    """
    if not constraints:
        raise ValueError("至少需要一个约束")
    config = get_config()
    labels = tuple(c.label for c in constraints)
    exprs = [c.expr for c in constraints]
    m = len(exprs)

    polys = [[Poly.zero(exprs[0].space)] * m for _ in range(m)]
    entries = np.zeros((m, m))
    constant = True
    for j in range(m):
        for l in range(j + 1, m):
            p = poisson_bracket(exprs[j], exprs[l], space)
            polys[j][l], polys[l][j] = p, -p
            if p.is_constant():
                entries[j, l] = p.constant_term()
                entries[l, j] = -entries[j, l]
            else:
                entries[j, l] = entries[l, j] = np.nan
                constant = False

    zero_rows = tuple(labels[j] for j in range(m) if all(p.is_zero() for p in polys[j]))

    if not constant:
        logger.warning("Θ 含非常数元素，只保存不做分块求逆")
        return ThetaMatrix(labels, tuple(map(tuple, polys)), entries, False, None, zero_rows, ())

    scale = max(1.0, np.abs(entries).max())
    tol = config.rank_tolerance * scale
    rank = int(np.linalg.matrix_rank(entries, tol=tol))

    blocks = []
    for rows, cols in _components(np.abs(entries) > tol):
        sub = entries[np.ix_(rows, cols)]
        inverse = None
        if len(rows) == len(cols) and np.linalg.matrix_rank(sub, tol=tol) == len(rows):
            inverse = np.linalg.inv(sub)
        blocks.append(ThetaBlock(
            rows=tuple(labels[r] for r in rows),
            cols=tuple(labels[c] for c in cols),
            matrix=sub,
            inverse=inverse,
        ))

    logger.debug(f"Θ 秩为 {rank}，零行 {list(zero_rows)}，分块 {[(b.rows, b.cols) for b in blocks]}")
    return ThetaMatrix(labels, tuple(map(tuple, polys)), entries, True, rank, zero_rows, tuple(blocks))
