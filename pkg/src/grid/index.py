"""Grid of side-1/2 cells with point buckets P(C) and neighbour sets N(C).

The grid satisfies the four properties the decision algorithm relies on:
(1) cells are side-1/2 squares, so each bucket is a clique; (2) every point
is in exactly one bucket; (3) for a point q in C, every point within
distance 1 of q is in a cell of N(C); (4) each cell lies in N(C) for at most
25 cells C.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from src.constants import CELL_SIDE, NEIGHBOR_RADIUS_CELLS
from src.errors import InputError
from src.geometry.primitives import Point, PointSet

logger = logging.getLogger(__name__)

_OFFSETS = [
    (dx, dy)
    for dx in range(-NEIGHBOR_RADIUS_CELLS, NEIGHBOR_RADIUS_CELLS + 1)
    for dy in range(-NEIGHBOR_RADIUS_CELLS, NEIGHBOR_RADIUS_CELLS + 1)
]


class CellKey(NamedTuple):
    ix: int
    iy: int


@dataclass(frozen=True)
class GridIndex:
    """
    Immutable map from cell keys to sorted point ids.

    pc_sizes caches |P_C| for every stored cell; buckets are disjoint so the
    union size is the sum of neighbouring bucket sizes.
    """

    cells: dict[CellKey, tuple[int, ...]]
    n: int
    pc_sizes: dict[CellKey, int] = field(default_factory=dict, repr=False)

    def keys(self) -> list[CellKey]:
        """Stored keys in sorted order."""
        return sorted(self.cells)

    def bucket(self, key: CellKey) -> tuple[int, ...]:
        return self.cells.get(key, ())

    def __contains__(self, key) -> bool:
        return key in self.cells


def key_of(p: Point) -> CellKey:
    """Grid cell whose half-open CELL_SIDE square holds p."""
    return CellKey(math.floor(p.x / CELL_SIDE), math.floor(p.y / CELL_SIDE))


def build_grid(ps: PointSet) -> GridIndex:
    """
    Bucket every point by its floor key.

    Sort-based (numpy lexsort) rather than hash-based so that bucket contents
    and key order are deterministic.
    """
    n = len(ps)
    if n == 0:
        return GridIndex({}, 0, {})

    ix = np.floor(ps.xs / CELL_SIDE).astype(np.int64)
    iy = np.floor(ps.ys / CELL_SIDE).astype(np.int64)
    # lexsort is stable, so ids stay ascending inside each bucket
    order = np.lexsort((iy, ix))
    sx, sy = ix[order], iy[order]
    breaks = np.flatnonzero((np.diff(sx) != 0) | (np.diff(sy) != 0)) + 1
    starts = np.concatenate(([0], breaks))
    ends = np.concatenate((breaks, [n]))

    cells: dict[CellKey, tuple[int, ...]] = {}
    for start, end in zip(starts, ends):
        key = CellKey(int(sx[start]), int(sy[start]))
        cells[key] = tuple(int(i) for i in order[start:end])

    pc_sizes = {
        key: sum(
            len(cells.get(CellKey(key.ix + dx, key.iy + dy), ())) for dx, dy in _OFFSETS
        )
        for key in cells
    }

    logger.debug(f"build_grid(): {n} points in {len(cells)} cells")
    return GridIndex(cells, n, pc_sizes)


def neighbors(key: CellKey, g: GridIndex | None = None) -> frozenset[CellKey]:
    """
    N(C): the 5x5 block of keys around key, restricted to stored cells when a
    grid is given.
    """
    block = (CellKey(key.ix + dx, key.iy + dy) for dx, dy in _OFFSETS)
    if g is None:
        return frozenset(block)
    return frozenset(k for k in block if k in g.cells)


def union_neighborhood(g: GridIndex, key: CellKey) -> list[int]:
    """P_C: sorted ids of every point in a cell of N(C)."""
    if key not in g.cells:
        raise InputError(f"Cell {tuple(key)} is not in the grid")
    ids: list[int] = []
    for nkey in neighbors(key, g):
        ids.extend(g.cells[nkey])
    ids.sort()
    return ids


def heavy_cells(g: GridIndex, k: int) -> list[CellKey]:
    """Keys with |P_C| >= k, in sorted order."""
    return [key for key in g.keys() if g.pc_sizes[key] >= k]
