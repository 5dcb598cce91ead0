"""Planar primitives and the unit-distance predicate that defines G(P)."""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from src.errors import ContractError, InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InputError(f"Point coordinates must be finite: ({self.x}, {self.y})")


@dataclass(frozen=True, eq=False)
class PointSet:
    """
    Ordered planar points; a point's id is its position.

    Coordinates are held as a read-only (n, 2) float64 array so solvers can
    vectorise distance computations. Duplicates are allowed here and rejected
    by solver entry points (see require_distinct).
    """

    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=np.float64, copy=True)
        if coords.size == 0:
            coords = coords.reshape(0, 2)
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise InputError(f"Expected an (n, 2) coordinate array, got {coords.shape}")
        if not np.isfinite(coords).all():
            bad = int(np.flatnonzero(~np.isfinite(coords).all(axis=1))[0])
            raise InputError(f"Point {bad} has a non-finite coordinate")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_points(cls, points: Iterable[Point | tuple[float, float]]) -> "PointSet":
        rows = [(p.x, p.y) if isinstance(p, Point) else tuple(p) for p in points]
        return cls(np.array(rows, dtype=np.float64).reshape(-1, 2))

    def __len__(self) -> int:
        return self.coords.shape[0]

    def __getitem__(self, idx: int) -> Point:
        x, y = self.coords[idx]
        return Point(float(x), float(y))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def xs(self) -> np.ndarray:
        return self.coords[:, 0]

    @property
    def ys(self) -> np.ndarray:
        return self.coords[:, 1]

    def subset(self, ids: Sequence[int]) -> "PointSet":
        return PointSet(self.coords[np.asarray(ids, dtype=np.int64)])

    def mirrored_y(self, about_y: float) -> "PointSet":
        """Reflect every point across the horizontal line y = about_y."""
        mirrored = self.coords.copy()
        mirrored[:, 1] = 2.0 * about_y - mirrored[:, 1]
        return PointSet(mirrored)


@dataclass(frozen=True)
class CliqueResult:
    """A clique of G(P) with a record of which algorithm produced it."""

    indices: tuple[int, ...]
    algorithm: str
    checks: tuple[str, ...] = field(default=())

    @property
    def size(self) -> int:
        return len(self.indices)

    @classmethod
    def verified(
        cls,
        ps: PointSet,
        ids: Iterable[int],
        algorithm: str,
        checks: tuple[str, ...] = (),
    ) -> "CliqueResult":
        """
        Sort, deduplicate and verify ids before wrapping them.

        Raises ContractError when the ids do not form a clique: every solver
        builds its result through here, so a failure means a solver bug.
        """
        indices = tuple(sorted(set(int(i) for i in ids)))
        if not is_clique(ps, indices):
            logger.error(f"{algorithm} produced a non-clique: {indices}")
            raise ContractError(f"{algorithm} returned a set that is not a clique")
        return cls(indices, algorithm, checks + ("is_clique",))

    def mapped(self, mapping: Sequence[int]) -> "CliqueResult":
        """Translate ids through mapping (local id -> original id)."""
        return CliqueResult(
            tuple(sorted(mapping[i] for i in self.indices)), self.algorithm, self.checks
        )


def dist_le_one(p: Point, q: Point) -> bool:
    """Closed unit-distance test on the squared distance; no sqrt, no epsilon."""
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy <= 1.0


def squared_distances(coords: np.ndarray) -> np.ndarray:
    """Pairwise squared distances with the same arithmetic as dist_le_one."""
    dx = coords[:, 0][:, None] - coords[:, 0][None, :]
    dy = coords[:, 1][:, None] - coords[:, 1][None, :]
    return dx * dx + dy * dy


def cross_squared_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared distances between every row of a and every row of b."""
    dx = a[:, 0][:, None] - b[:, 0][None, :]
    dy = a[:, 1][:, None] - b[:, 1][None, :]
    return dx * dx + dy * dy


def adjacency_matrix(ps: PointSet) -> np.ndarray:
    """Boolean adjacency of G(P), diagonal included."""
    return squared_distances(ps.coords) <= 1.0


def _check_ids(ps: PointSet, ids: Sequence[int]) -> np.ndarray:
    arr = np.asarray(list(ids), dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= len(ps)):
        raise InputError(f"Point id out of range for {len(ps)} points: {list(ids)}")
    return arr


def is_clique(ps: PointSet, ids: Iterable[int]) -> bool:
    """
    Check that every pair of the given points is within distance 1.

    Args:
        ps: Point set the ids refer to
        ids: Point ids; sets of size 0 or 1 are cliques

    Returns:
        True iff the ids form a clique of G(P)

    Raises:
        InputError: If an id is outside [0, len(ps))
    """
    arr = _check_ids(ps, list(ids))
    if arr.size <= 1:
        return True
    return bool((squared_distances(ps.coords[arr]) <= 1.0).all())


def clique_violations(ps: PointSet, ids: Iterable[int]) -> list[tuple[int, int]]:
    """Every pair (i, j), i < j, of ids farther than 1 apart."""
    arr = np.unique(_check_ids(ps, list(ids)))
    if arr.size <= 1:
        return []
    far = squared_distances(ps.coords[arr]) > 1.0
    rows, cols = np.nonzero(np.triu(far, k=1))
    return [(int(arr[r]), int(arr[c])) for r, c in zip(rows, cols)]


def require_distinct(ps: PointSet) -> None:
    """Reject coincident points; solver entry points call this first."""
    if len(ps) < 2:
        return
    unique = np.unique(ps.coords, axis=0)
    if unique.shape[0] != len(ps):
        order = np.lexsort((ps.ys, ps.xs))
        sorted_coords = ps.coords[order]
        same = np.flatnonzero((np.diff(sorted_coords, axis=0) == 0).all(axis=1))[0]
        a, b = sorted(int(i) for i in order[same : same + 2])
        x, y = (float(v) for v in ps.coords[a])
        logger.error(f"require_distinct(): points {a} and {b} coincide")
        raise InputError(f"Duplicate points {a} and {b} at ({x}, {y})")
