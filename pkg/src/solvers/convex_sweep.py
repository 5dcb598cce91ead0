"""
Maximum clique through a given point for points in convex position.

After normalising so the anchor p_1 is strictly leftmost, the upper hull
p_1..p_t is swept left to right. At step i the candidate set is
S'(i) = S_u(i) | S'_l(i): upper-hull points left of p_i within distance 1 of
it, plus a lower clique that contains S_l(i) (the same set over the remaining
points). Both halves are cliques, so each step is a cobipartite solve. The
sweep runs once as-is and once mirrored through the anchor's horizontal line.

Steps are 1-based to match the usual p_1..p_t numbering.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from src import config
from src.constants import SWEEP_UPDATE_BUDGET
from src.errors import ContractError, InputError
from src.geometry.hull import (
    NormalizedInstance,
    has_collinear_triple,
    is_convex_position,
    normalize_for_anchor,
    upper_hull,
)
from src.geometry.primitives import (
    CliqueResult,
    Point,
    PointSet,
    dist_le_one,
    is_clique,
    require_distinct,
)
from src.solvers.cobipartite import CobipartiteInstance, max_clique_cobipartite

logger = logging.getLogger(__name__)

ALGORITHM = "convex-given"
LOWER_POLICIES = ("relaxed", "exact")


class RegionTag(Enum):
    R1 = "R1"
    R2 = "R2"


def classify_region(p: Point, anchor: Point) -> RegionTag:
    """R1 iff p is within distance 1 of q* = (x(anchor), y(anchor) - 1)."""
    q_star = Point(anchor.x, anchor.y - 1.0)
    return RegionTag.R1 if dist_le_one(p, q_star) else RegionTag.R2


@dataclass(frozen=True)
class UpdateBatch:
    upper_insertions: frozenset[int] = frozenset()
    upper_deletions: frozenset[int] = frozenset()
    lower_insertions: frozenset[int] = frozenset()
    lower_deletions: frozenset[int] = frozenset()

    @property
    def insertions(self) -> frozenset[int]:
        return self.upper_insertions | self.lower_insertions

    @property
    def deletions(self) -> frozenset[int]:
        return self.upper_deletions | self.lower_deletions


@dataclass(frozen=True, eq=False)
class SweepState:
    instance: NormalizedInstance
    pu: tuple[int, ...]
    pl: tuple[int, ...]
    h: int
    i: int
    su: frozenset[int]
    slp: frozenset[int]
    sl: frozenset[int]  # S_l(i), kept to check containment in slp
    region: dict[int, RegionTag]
    lower_policy: str = "relaxed"

    @property
    def points(self) -> PointSet:
        return self.instance.points

    @property
    def t(self) -> int:
        return len(self.pu)


@dataclass
class UpdateCounts:
    """Per-point insert/delete counters over one sweep (local ids)."""

    upper_inserts: Counter = field(default_factory=Counter)
    upper_deletes: Counter = field(default_factory=Counter)
    lower_inserts: Counter = field(default_factory=Counter)
    lower_deletes: Counter = field(default_factory=Counter)
    lower_deletes_early: Counter = field(default_factory=Counter)  # steps <= h

    def record(self, batch: UpdateBatch, early: bool) -> None:
        self.upper_inserts.update(batch.upper_insertions)
        self.upper_deletes.update(batch.upper_deletions)
        self.lower_inserts.update(batch.lower_insertions)
        self.lower_deletes.update(batch.lower_deletions)
        if early:
            self.lower_deletes_early.update(batch.lower_deletions)

    @property
    def total(self) -> int:
        return sum(
            sum(c.values())
            for c in (
                self.upper_inserts,
                self.upper_deletes,
                self.lower_inserts,
                self.lower_deletes,
            )
        )

    def max_per_point(self, counter_name: str) -> int:
        counter: Counter = getattr(self, counter_name)
        return max(counter.values(), default=0)

    def as_dict(self) -> dict:
        return {
            "upper_inserts": sum(self.upper_inserts.values()),
            "upper_deletes": sum(self.upper_deletes.values()),
            "lower_inserts": sum(self.lower_inserts.values()),
            "lower_deletes": sum(self.lower_deletes.values()),
            "total": self.total,
        }


@dataclass(frozen=True)
class StepRecord:
    i: int
    upper_size: int
    lower_size: int
    clique_size: int
    lower_contains_exact: bool
    halves_are_cliques: bool


@dataclass(frozen=True, eq=False)
class SweepReport:
    clique: CliqueResult  # original ids
    counts: UpdateCounts
    steps: tuple[StepRecord, ...]
    points: int  # size of the normalised instance
    mirrored: bool

    @property
    def trace(self) -> list[int]:
        return [s.clique_size for s in self.steps]


def _require_convex(ps: PointSet) -> None:
    if not is_convex_position(ps):
        raise InputError("Points are not in convex position")


def target_sets(state: SweepState, j: int) -> tuple[frozenset[int], frozenset[int]]:
    """(S_u(j), S_l(j)): points with x <= x(p_j) within distance 1 of p_j."""
    if not 1 <= j <= state.t:
        raise InputError(f"Sweep position {j} outside [1, {state.t}]")
    coords = state.points.coords
    pj = state.pu[j - 1]
    upper = np.asarray(state.pu[:j], dtype=np.int64)
    d = coords[upper] - coords[pj]
    su = frozenset(int(p) for p in upper[d[:, 0] ** 2 + d[:, 1] ** 2 <= 1.0])

    if not state.pl:
        return su, frozenset()
    lower = np.asarray(state.pl, dtype=np.int64)
    d = coords[lower] - coords[pj]
    keep = (coords[lower, 0] <= coords[pj, 0]) & (d[:, 0] ** 2 + d[:, 1] ** 2 <= 1.0)
    return su, frozenset(int(p) for p in lower[keep])


def prepare_sweep(
    ps: PointSet, anchor: int, seed=None, lower_policy: str = "relaxed"
) -> SweepState:
    """Normalise ps for the anchor and return the sweep state at step 1."""
    return sweep_state(normalize_for_anchor(ps, anchor, seed), lower_policy)


def mirrored_instance(inst: NormalizedInstance) -> NormalizedInstance:
    """Reflect a normalised instance through the anchor's horizontal line."""
    about_y = float(inst.points.ys[inst.anchor])
    return replace(inst, points=inst.points.mirrored_y(about_y))


def sweep_state(inst: NormalizedInstance, lower_policy: str = "relaxed") -> SweepState:
    """Initial state (i = 1) over an already normalised instance."""
    if lower_policy not in LOWER_POLICIES:
        raise InputError(f"Unknown lower policy {lower_policy!r}")
    anchor = inst.mapping[inst.anchor]
    local = inst.points
    _require_convex(local)

    pu = tuple(upper_hull(local))
    if pu[0] != inst.anchor:
        logger.error(f"prepare_sweep(anchor={anchor}): hull starts at {pu[0]}")
        raise ContractError("Anchor is not the leftmost upper-hull point")
    if has_collinear_triple(local, pu):
        logger.warning(f"Upper hull around anchor {anchor} has collinear points")

    on_upper = set(pu)
    pl = tuple(p for p in range(len(local)) if p not in on_upper)
    h = int(np.argmax(local.ys[list(pu)])) + 1
    anchor_point = local[inst.anchor]
    region = {p: classify_region(local[p], anchor_point) for p in pl}

    state = SweepState(
        instance=inst,
        pu=pu,
        pl=pl,
        h=h,
        i=1,
        su=frozenset(),
        slp=frozenset(),
        sl=frozenset(),
        region=region,
        lower_policy=lower_policy,
    )
    su, sl = target_sets(state, 1)
    logger.debug(
        f"prepare_sweep(anchor={anchor}): {len(local)} points, t={len(pu)}, "
        f"h={h}, |P_l|={len(pl)}"
    )
    return replace(state, su=su, slp=sl, sl=sl)


def _relaxed_lower(state: SweepState, sl_next: frozenset[int]) -> frozenset[int]:
    coords = state.points.coords
    current = set(state.slp)
    for p in sorted(sl_next - state.slp):
        for q in sorted(current):
            if state.region[q] is not RegionTag.R1:
                continue
            dx, dy = coords[p] - coords[q]
            if dx * dx + dy * dy > 1.0:
                current.discard(q)
        current.add(p)
    return frozenset(current)


def advance(state: SweepState) -> tuple[UpdateBatch, SweepState]:
    """
    Move from step i to i + 1. Up to h both halves are recomputed; past h the
    lower half keeps its members and each newly entering point evicts the R1
    members farther than 1 from it.
    """
    if state.i >= state.t:
        raise InputError(f"Sweep already at its last step ({state.t})")
    j = state.i + 1
    su, sl = target_sets(state, j)
    if j <= state.h or state.lower_policy == "exact":
        slp = sl
    else:
        slp = _relaxed_lower(state, sl)

    if config.checks_enabled():
        if not (is_clique(state.points, su) and is_clique(state.points, slp)):
            logger.error(f"advance(): step {j} lost the clique property")
            raise ContractError(f"Sweep halves at step {j} are not cliques")
        if not sl <= slp:
            logger.error(f"advance(): step {j} lower set misses {sorted(sl - slp)}")
            raise ContractError(f"Lower clique at step {j} does not contain S_l")

    batch = UpdateBatch(
        upper_insertions=su - state.su,
        upper_deletions=state.su - su,
        lower_insertions=slp - state.slp,
        lower_deletions=state.slp - slp,
    )
    return batch, replace(state, i=j, su=su, slp=slp, sl=sl)


def _solve_step(state: SweepState) -> CliqueResult:
    upper = tuple(sorted(state.su))
    lower = tuple(sorted(state.slp))
    return max_clique_cobipartite(CobipartiteInstance(upper, lower, state.points))


def _step_record(state: SweepState, clique: CliqueResult) -> StepRecord:
    halves_ok = is_clique(state.points, state.su) and is_clique(state.points, state.slp)
    return StepRecord(
        i=state.i,
        upper_size=len(state.su),
        lower_size=len(state.slp),
        clique_size=clique.size,
        lower_contains_exact=state.sl <= state.slp,
        halves_are_cliques=halves_ok,
    )


def run_sweep(state: SweepState, mirrored: bool = False) -> SweepReport:
    """Solve every step of the sweep; the first strictly largest clique wins."""
    counts = UpdateCounts()
    counts.record(
        UpdateBatch(upper_insertions=state.su, lower_insertions=state.slp), early=True
    )
    best = _solve_step(state)
    steps = [_step_record(state, best)]
    while state.i < state.t:
        batch, state = advance(state)
        counts.record(batch, early=state.i <= state.h)
        clique = _solve_step(state)
        steps.append(_step_record(state, clique))
        if clique.size > best.size:
            best = clique

    m = len(state.points)
    if counts.total > SWEEP_UPDATE_BUDGET * m:
        logger.warning(
            f"run_sweep(): {counts.total} updates exceed {SWEEP_UPDATE_BUDGET}*{m}"
        )
    mapping = state.instance.mapping
    return SweepReport(
        clique=best.mapped(mapping),
        counts=counts,
        steps=tuple(steps),
        points=m,
        mirrored=mirrored,
    )


def sweep_given_point(
    ps: PointSet, anchor: int, seed=None, lower_policy: str = "relaxed"
) -> tuple[CliqueResult, list[SweepReport]]:
    """Both sweep runs plus their reports; the as-is run wins ties."""
    if not 0 <= anchor < len(ps):
        raise InputError(f"Anchor {anchor} out of range for {len(ps)} points")
    require_distinct(ps)
    _require_convex(ps)

    # One rotation for both runs; the second is its exact reflection
    inst = normalize_for_anchor(ps, anchor, seed)
    reports = [
        run_sweep(sweep_state(inst, lower_policy), mirrored=False),
        run_sweep(sweep_state(mirrored_instance(inst), lower_policy), mirrored=True),
    ]
    best = max(reports, key=lambda r: r.clique.size)
    result = CliqueResult.verified(
        ps, best.clique.indices, ALGORITHM, ("koenig", "mirrored-sweep")
    )
    logger.debug(
        f"sweep_given_point(anchor={anchor}): sizes "
        f"{[r.clique.size for r in reports]}, updates "
        f"{[r.counts.total for r in reports]}"
    )
    return result, reports


def max_clique_given_point(
    ps: PointSet, anchor: int, seed=None, lower_policy: str = "relaxed"
) -> CliqueResult:
    """A clique at least as large as every clique of G(P) containing the anchor."""
    result, _ = sweep_given_point(ps, anchor, seed, lower_policy)
    return result
