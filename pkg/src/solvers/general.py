"""
General-case maximum clique: a grid-localised decision procedure for a target
size k, driven by exponential search followed by binary search.
"""

import logging
import time
from dataclasses import dataclass, field

from src.errors import ContractError, InputError
from src.geometry.primitives import CliqueResult, PointSet, require_distinct
from src.grid.index import GridIndex, build_grid, heavy_cells, union_neighborhood
from src.solvers.lens import max_clique_lens_baseline

logger = logging.getLogger(__name__)

ALGORITHM = "general"


@dataclass(frozen=True)
class DecisionOutcome:
    found: bool
    witness: CliqueResult | None
    case: str = "none"  # "bucket" | "neighborhood" | "none"
    heavy_cells: int = 0
    solved_cells: int = 0

    def __post_init__(self):
        if self.found != (self.witness is not None):
            raise ContractError("DecisionOutcome.found must match witness presence")


@dataclass(frozen=True)
class DecisionStep:
    k: int
    found: bool
    elapsed_ms: float
    case: str
    heavy_cells: int


@dataclass
class SearchTrace:
    probes: list[DecisionStep] = field(default_factory=list)
    K: int = 0

    def is_monotone(self) -> bool:
        """Every decision at k <= K succeeded and every one above K failed."""
        return all(p.found == (p.k <= self.K) for p in self.probes)

    def as_dicts(self) -> list[dict]:
        return [
            {"k": p.k, "found": p.found, "elapsed_ms": round(p.elapsed_ms, 3)}
            for p in self.probes
        ]


def decide_clique(
    ps: PointSet,
    g: GridIndex,
    k: int,
    cache: dict[tuple[int, ...], CliqueResult] | None = None,
) -> DecisionOutcome:
    """
    Decide whether G(P) has a clique of size >= k.

    (i) A bucket with >= k points is a clique on its own, so the first such
    cell (sorted key order) is returned truncated to k.
    (ii) Otherwise every clique of size >= k touching a cell C lies in P_C, so
    only cells with |P_C| >= k need solving; the first witness wins.

    cache maps a P_C id tuple to its maximum clique and lets repeated decisions
    on the same grid skip re-solving identical neighbourhoods.
    """
    if k < 1:
        raise InputError(f"Clique size k must be >= 1, got {k}")
    if g.n != len(ps):
        raise InputError(f"Grid built for {g.n} points, point set has {len(ps)}")
    if k > len(ps):
        return DecisionOutcome(False, None)

    keys = g.keys()
    for key in keys:
        bucket = g.bucket(key)
        if len(bucket) >= k:
            logger.debug(
                f"decide_clique(k={k}): bucket {tuple(key)} holds {len(bucket)}"
            )
            witness = CliqueResult.verified(ps, bucket[:k], ALGORITHM, ("bucket",))
            return DecisionOutcome(True, witness, "bucket")

    heavy = heavy_cells(g, k)
    solved = 0
    for key in heavy:
        pc = tuple(union_neighborhood(g, key))
        if cache is not None and pc in cache:
            clique = cache[pc]
        else:
            clique = max_clique_lens_baseline(ps, pc)
            solved += 1
            if cache is not None:
                cache[pc] = clique
        if clique.size >= k:
            logger.debug(
                f"decide_clique(k={k}): {len(keys)} cells, {len(heavy)} heavy, "
                f"witness of size {clique.size} at {tuple(key)}"
            )
            witness = CliqueResult(clique.indices, ALGORITHM, clique.checks)
            return DecisionOutcome(True, witness, "neighborhood", len(heavy), solved)

    logger.debug(f"decide_clique(k={k}): {len(keys)} cells, {len(heavy)} heavy, none")
    return DecisionOutcome(False, None, "none", len(heavy), solved)


def max_clique_general(ps: PointSet) -> tuple[CliqueResult, SearchTrace]:
    """
    Exponential search over k = 1, 2, 4, ... until a decision fails, then binary
    search between the last success and the first failure. Decisions for k > n
    fail without work. The grid and the per-neighbourhood cache are shared
    by every decision.
    """
    n = len(ps)
    if n == 0:
        raise InputError("max_clique_general requires at least one point")
    require_distinct(ps)

    g = build_grid(ps)
    cache: dict[tuple[int, ...], CliqueResult] = {}
    trace = SearchTrace()
    best: CliqueResult | None = None

    def decide(k: int) -> bool:
        nonlocal best
        started = time.perf_counter()
        outcome = decide_clique(ps, g, k, cache)
        elapsed = (time.perf_counter() - started) * 1000.0
        trace.probes.append(
            DecisionStep(k, outcome.found, elapsed, outcome.case, outcome.heavy_cells)
        )
        if outcome.found and (best is None or outcome.witness.size > best.size):
            best = outcome.witness
        return outcome.found

    lo = 1
    decide(lo)
    hi = 2
    while decide(hi):
        lo, hi = hi, hi * 2

    # Invariant: a clique of size lo exists, none of size hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if decide(mid):
            lo = mid
        else:
            hi = mid

    trace.K = lo
    # A witness may exceed the k it was found for, so the best one is at least K
    if best is None or best.size < lo:
        logger.error(f"max_clique_general(): no witness of size {lo} retained")
        raise ContractError("Binary search lost the witness for the final size")
    if best.size > lo:
        logger.error(f"max_clique_general(): witness of size {best.size} above K={lo}")
        raise ContractError("Decisions are not monotone in k")

    logger.debug(f"max_clique_general(): n={n}, K={lo}, {len(trace.probes)} decisions")
    return best, trace
