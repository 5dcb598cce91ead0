"""Convex hulls and the anchor normalisation used by the convex sweep."""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.constants import MAX_ROTATION_RETRIES
from src.errors import InputError, NormalizationError
from src.geometry.primitives import PointSet

logger = logging.getLogger(__name__)


def cross(o: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    """Twice the signed area of (o, a, b); positive for a left turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _chain(coords: np.ndarray, order: Sequence[int]) -> list[int]:
    # Pops only on strict left turns, so collinear boundary points survive
    chain: list[int] = []
    for idx in order:
        while (
            len(chain) >= 2
            and cross(coords[chain[-2]], coords[chain[-1]], coords[idx]) > 0
        ):
            chain.pop()
        chain.append(idx)
    return chain


def upper_hull(ps: PointSet) -> list[int]:
    """
    Ids of the upper convex hull, left to right.

    Both x-extreme points are included. Requires pairwise distinct
    x-coordinates (normalize_for_anchor guarantees this).
    """
    n = len(ps)
    if n == 0:
        return []
    if np.unique(ps.xs).size != n:
        raise InputError("upper_hull requires pairwise distinct x-coordinates")
    order = [int(i) for i in np.argsort(ps.xs, kind="stable")]
    return _chain(ps.coords, order)


def hull_boundary(ps: PointSet) -> set[int]:
    """Ids on the convex hull boundary (vertices and collinear boundary points)."""
    n = len(ps)
    if n <= 2:
        return set(range(n))
    order = [int(i) for i in np.lexsort((ps.ys, ps.xs))]
    coords = ps.coords
    # Upper chain left to right with left-turn pops, lower chain the same
    # way after mirroring (negate y)
    mirrored = coords * np.array([1.0, -1.0])
    upper = _chain(coords, order)
    lower = _chain(mirrored, order)
    return set(upper) | set(lower)


def is_convex_position(ps: PointSet) -> bool:
    """True iff every point lies on the boundary of the convex hull."""
    return len(hull_boundary(ps)) == len(ps)


def has_collinear_triple(ps: PointSet, chain: Sequence[int]) -> bool:
    """True iff three consecutive ids of a hull chain make a zero turn."""
    coords = ps.coords
    return any(
        cross(coords[a], coords[b], coords[c]) == 0
        for a, b, c in zip(chain, chain[1:], chain[2:])
    )


@dataclass(frozen=True, eq=False)
class NormalizedInstance:
    """Points within distance 1 of the anchor, rotated about it."""

    points: PointSet
    mapping: tuple[int, ...]  # local id -> original id
    anchor: int  # local id of the anchor
    angle: float  # radians, counter-clockwise


def _feasible_angles(rel: np.ndarray) -> tuple[float, float] | None:
    """
    Open interval of rotation angles that put every vector of rel strictly
    to the right of the origin, or None if the vectors span >= pi.
    """
    phis = np.sort(np.arctan2(rel[:, 1], rel[:, 0]))
    gaps = np.append(np.diff(phis), phis[0] + 2.0 * math.pi - phis[-1])
    widest = int(np.argmax(gaps))
    gap = float(gaps[widest])
    if gap <= math.pi:
        return None
    start = float(phis[(widest + 1) % len(phis)])
    span = 2.0 * math.pi - gap
    lo = -math.pi / 2.0 - start
    hi = math.pi / 2.0 - start - span
    # Keep clear of the interval ends, where the anchor only ties for leftmost
    shrink = 0.01 * (hi - lo)
    return lo + shrink, hi - shrink


def _rotate(coords: np.ndarray, centre: np.ndarray, angle: float) -> np.ndarray:
    if angle == 0.0:
        return coords.copy()
    c, s = math.cos(angle), math.sin(angle)
    rel = coords - centre
    rotated = np.empty_like(coords)
    rotated[:, 0] = centre[0] + rel[:, 0] * c - rel[:, 1] * s
    rotated[:, 1] = centre[1] + rel[:, 0] * s + rel[:, 1] * c
    return rotated


def _acceptable(coords: np.ndarray, anchor: int) -> bool:
    m = coords.shape[0]
    others = np.delete(coords[:, 0], anchor)
    if others.size and not (others > coords[anchor, 0]).all():
        return False
    return np.unique(coords[:, 0]).size == m and np.unique(coords[:, 1]).size == m


def normalize_for_anchor(ps: PointSet, anchor: int, rng_seed) -> NormalizedInstance:
    """
    Restrict to the unit disk around the anchor and rotate about the anchor so
    that it is strictly leftmost and all x- and all y-coordinates are distinct.

    Angle 0 is tried first. Further angles are drawn from the seeded RNG,
    inside the range that keeps the anchor leftmost when the neighbours span
    less than a half-plane, otherwise from the whole circle.
    """
    if not 0 <= anchor < len(ps):
        raise InputError(f"Anchor {anchor} out of range for {len(ps)} points")

    dx = ps.xs - ps.xs[anchor]
    dy = ps.ys - ps.ys[anchor]
    d2 = dx * dx + dy * dy
    mapping = tuple(int(i) for i in np.flatnonzero(d2 <= 1.0))
    local_anchor = mapping.index(anchor)
    coords = ps.coords[list(mapping)]
    centre = coords[local_anchor].copy()

    if len(mapping) == 1:
        return NormalizedInstance(PointSet(coords), mapping, local_anchor, 0.0)

    rel = np.delete(coords - centre, local_anchor, axis=0)
    interval = _feasible_angles(rel)
    rng = np.random.default_rng(rng_seed)

    angle = 0.0
    for attempt in range(MAX_ROTATION_RETRIES + 1):
        if attempt > 0:
            if interval is not None:
                angle = float(rng.uniform(*interval))
            else:
                angle = float(rng.uniform(-math.pi, math.pi))
        rotated = _rotate(coords, centre, angle)
        if _acceptable(rotated, local_anchor):
            logger.debug(
                f"normalize_for_anchor(anchor={anchor}): {len(mapping)} points, "
                f"angle={angle:.6f} after {attempt} retries"
            )
            return NormalizedInstance(PointSet(rotated), mapping, local_anchor, angle)

    raise NormalizationError(
        f"No rotation within {MAX_ROTATION_RETRIES} retries makes anchor {anchor} "
        "strictly leftmost with distinct coordinates"
    )
