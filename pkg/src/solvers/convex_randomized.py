"""
Randomised maximum clique for points in convex position.

A single decision at k0 = ceil(n^(6/7)) splits the work: when no clique
of size k0 exists the general solver is exact and fast enough, otherwise a
maximum clique is large, so a uniformly random point lies in it with
probability >= k0 / n and a few anchored sweeps find it with high
probability.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.constants import DEFAULT_REPEAT_MULTIPLIER
from src.errors import InputError
from src.geometry.hull import is_convex_position
from src.geometry.primitives import CliqueResult, PointSet, require_distinct
from src.grid.index import build_grid
from src.solvers.convex_sweep import max_clique_given_point
from src.solvers.general import decide_clique, max_clique_general

logger = logging.getLogger(__name__)

ALGORITHM = "convex"


@dataclass(frozen=True)
class RandomizedConfig:
    c: float = DEFAULT_REPEAT_MULTIPLIER
    seed: int | None = None
    threshold_override: int | None = None

    def __post_init__(self):
        if not self.c > 0:
            raise InputError(f"Repeat multiplier c must be positive, got {self.c}")
        if self.threshold_override is not None and self.threshold_override < 1:
            raise InputError(
                f"threshold_override must be >= 1, got {self.threshold_override}"
            )


@dataclass(frozen=True)
class RandomizedRun:
    clique: CliqueResult
    branch: str  # "general" | "sampling" | "singleton"
    k0: int
    repetitions: int
    anchors: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "branch": self.branch,
            "k0": self.k0,
            "repetitions": self.repetitions,
            "anchors": list(self.anchors),
        }


def threshold(n: int) -> int:
    """ceil(n^(6/7)); the small slack keeps exact powers from rounding up."""
    return max(1, math.ceil(n ** (6.0 / 7.0) - 1e-9))


def repetitions(n: int, c: float) -> int:
    """ceil(c * n^(1/7) * ln n), at least one."""
    if n <= 1:
        return 1
    return max(1, math.ceil(c * n ** (1.0 / 7.0) * math.log(n)))


def run_convex(ps: PointSet, cfg: RandomizedConfig) -> RandomizedRun:
    """
    Randomized maximum clique for points in convex position.

    If no clique of size k0 = threshold(n) exists, the general solver is exact
    and cheap enough. Otherwise r anchors are drawn and the best anchored
    sweep wins.

    Args:
        ps: Points in convex position
        cfg: Repeat multiplier, seed and optional threshold override

    Returns:
        RandomizedRun with the clique, the branch taken, k0, r and the anchors

    Raises:
        InputError: If ps is empty, has duplicates or is not in convex position
    """
    n = len(ps)
    if n == 0:
        raise InputError("max_clique_convex requires at least one point")
    require_distinct(ps)
    if not is_convex_position(ps):
        raise InputError("Points are not in convex position")
    if n == 1:
        return RandomizedRun(
            CliqueResult.verified(ps, (0,), ALGORITHM), "singleton", 1, 0, ()
        )

    k0 = cfg.threshold_override or threshold(n)
    outcome = decide_clique(ps, build_grid(ps), k0)
    if not outcome.found:
        clique, _ = max_clique_general(ps)
        logger.debug(f"run_convex(): n={n}, no clique of size {k0}, general branch")
        return RandomizedRun(
            CliqueResult(clique.indices, ALGORITHM, clique.checks), "general", k0, 0, ()
        )

    r = repetitions(n, cfg.c)
    rng = np.random.default_rng(cfg.seed)
    # Anchors and per-run rotation seeds are drawn up front from one stream
    anchors = tuple(int(a) for a in rng.integers(0, n, size=r))
    run_seeds = [int(s) for s in rng.integers(0, 2**63 - 1, size=r)]

    best: CliqueResult = outcome.witness
    solved: dict[int, CliqueResult] = {}
    for anchor, run_seed in zip(anchors, run_seeds):
        if anchor in solved:
            continue
        solved[anchor] = max_clique_given_point(ps, anchor, run_seed)
        if solved[anchor].size > best.size:
            best = solved[anchor]

    logger.debug(
        f"run_convex(): n={n}, k0={k0}, {r} repetitions over "
        f"{len(solved)} distinct anchors, best={best.size}"
    )
    result = CliqueResult.verified(ps, best.indices, ALGORITHM, ("sampled",))
    return RandomizedRun(result, "sampling", k0, r, anchors)


def max_clique_convex(
    ps: PointSet, cfg: RandomizedConfig | None = None
) -> CliqueResult:
    """A maximum clique with high probability; always a valid clique."""
    return run_convex(ps, cfg or RandomizedConfig()).clique
