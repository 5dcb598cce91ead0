"""
Seeded instance generators.

Every generator keeps squared pairwise distances at least DISTANCE_MARGIN away
from 1 and at least DUPLICATE_MARGIN away from 0, so the closed predicate
|pq| <= 1 gives the same answer however the coordinates are rounded later.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.constants import DISTANCE_MARGIN, DUPLICATE_MARGIN, MAX_RESAMPLE_ATTEMPTS
from src.errors import GenerationError, InputError
from src.geometry.hull import is_convex_position
from src.geometry.primitives import PointSet, squared_distances

logger = logging.getLogger(__name__)

FAMILIES = ("uniform_square", "clustered_bounded_k", "convex_circle")
CLUSTER_RADIUS = 0.4


@dataclass(frozen=True)
class GenSpec:
    """family, n, param (square side | cluster separation | circle radius), seed."""

    family: str
    n: int
    param: float
    seed: int | None = None
    k_max: int = 8

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"Unknown family {self.family!r}; expected {FAMILIES}")
        if self.n < 1:
            raise InputError(f"n must be >= 1, got {self.n}")
        if not self.param > 0:
            raise InputError(f"param must be positive, got {self.param}")

    def header(self) -> str:
        return (
            f"family={self.family} n={self.n} param={self.param} "
            f"seed={self.seed} k_max={self.k_max}"
        )


def _bad_distances(d2: np.ndarray) -> np.ndarray:
    return (np.abs(d2 - 1.0) < DISTANCE_MARGIN) | (d2 < DUPLICATE_MARGIN)


def margins_ok(ps: PointSet) -> bool:
    """True iff no pair is near distance 1 or near-coincident."""
    if len(ps) < 2:
        return True
    d2 = squared_distances(ps.coords)
    iu = np.triu_indices(len(ps), k=1)
    return not _bad_distances(d2[iu]).any()


def gen_uniform(n: int, side: float, seed=None) -> PointSet:
    """n uniform points in [0, side]^2; violating points are redrawn."""
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    if not side > 0:
        raise InputError(f"Square side must be positive, got {side}")
    rng = np.random.default_rng(seed)
    coords = np.empty((n, 2))
    for i in range(n):
        for _ in range(MAX_RESAMPLE_ATTEMPTS):
            candidate = rng.uniform(0.0, side, size=2)
            d = coords[:i] - candidate
            if not _bad_distances(d[:, 0] ** 2 + d[:, 1] ** 2).any():
                coords[i] = candidate
                break
        else:
            raise GenerationError(
                f"Point {i} violates the distance margin after "
                f"{MAX_RESAMPLE_ATTEMPTS} resamples"
            )
    logger.debug(f"gen_uniform(n={n}, side={side}, seed={seed})")
    return PointSet(coords)


def gen_bounded_k(n: int, k_max: int, separation: float, seed=None) -> PointSet:
    """
    ceil(n / k_max) clusters on a square lattice of spacing `separation`, each
    with up to k_max points in a radius-0.4 disk. Clusters fill in order, so
    the first one is full and K = min(n, k_max).
    """
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    if k_max < 1:
        raise InputError(f"k_max must be >= 1, got {k_max}")
    if not separation > 2:
        raise InputError(f"Cluster separation must exceed 2, got {separation}")
    rng = np.random.default_rng(seed)
    clusters = math.ceil(n / k_max)
    width = math.ceil(math.sqrt(clusters))

    coords = np.empty((n, 2))
    i = 0
    for c in range(clusters):
        centre = np.array([c % width, c // width], dtype=np.float64) * separation
        size = min(k_max, n - i)
        start = i
        for _ in range(size):
            for _ in range(MAX_RESAMPLE_ATTEMPTS):
                rho = CLUSTER_RADIUS * math.sqrt(rng.uniform())
                theta = rng.uniform(0.0, 2.0 * math.pi)
                candidate = centre + rho * np.array([math.cos(theta), math.sin(theta)])
                d = coords[start:i] - candidate
                # Intra-cluster pairs are <= 0.8 apart, so only duplicates matter
                if not (d[:, 0] ** 2 + d[:, 1] ** 2 < DUPLICATE_MARGIN).any():
                    coords[i] = candidate
                    break
            else:
                raise GenerationError(
                    f"Cluster {c} could not place a point after "
                    f"{MAX_RESAMPLE_ATTEMPTS} resamples"
                )
            i += 1
    logger.debug(
        f"gen_bounded_k(n={n}, k_max={k_max}, separation={separation}): "
        f"{clusters} clusters"
    )
    return PointSet(coords)


def _inward_caps(angles: np.ndarray, radius: float) -> np.ndarray:
    # Half the sagitta of each point over the chord joining its neighbours,
    # capped at radius * 1e-3
    before = angles - np.roll(angles, 1)
    after = np.roll(angles, -1) - angles
    before[0] += 2.0 * math.pi
    after[-1] += 2.0 * math.pi
    chord = np.cos((before + after) / 2.0) / np.cos((before - after) / 2.0)
    sagitta = radius * (1.0 - chord)
    return np.fmin(radius * 1e-3, 0.5 * sagitta)


def gen_convex(
    n: int, radius: float, seed=None, equally_spaced: bool = False
) -> PointSet:
    """
    n points near a circle, each pulled inward by a small random amount that
    keeps the polygon strictly convex.
    """
    if n < 3:
        raise InputError(f"gen_convex needs n >= 3, got {n}")
    if not radius > 0:
        raise InputError(f"Circle radius must be positive, got {radius}")
    rng = np.random.default_rng(seed)

    for attempt in range(MAX_RESAMPLE_ATTEMPTS):
        if equally_spaced:
            angles = 2.0 * math.pi * np.arange(n) / n
        else:
            angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
            if np.unique(angles).size != n:
                continue
        caps = _inward_caps(angles, radius)
        rho = radius - caps * (0.5 + 0.5 * rng.uniform(size=n))
        coords = np.column_stack((rho * np.cos(angles), rho * np.sin(angles)))
        ps = PointSet(coords)
        if margins_ok(ps) and is_convex_position(ps):
            logger.debug(
                f"gen_convex(n={n}, radius={radius}, seed={seed}): "
                f"{attempt} rejected draws"
            )
            return ps

    raise GenerationError(
        f"No convex instance with safe margins after {MAX_RESAMPLE_ATTEMPTS} draws"
    )


def generate(spec: GenSpec) -> PointSet:
    """Dispatch to the family's generator with the spec's parameters and seed."""
    if spec.family == "uniform_square":
        return gen_uniform(spec.n, spec.param, spec.seed)
    if spec.family == "clustered_bounded_k":
        return gen_bounded_k(spec.n, spec.k_max, spec.param, spec.seed)
    return gen_convex(spec.n, spec.param, spec.seed)
