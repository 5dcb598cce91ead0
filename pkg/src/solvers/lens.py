"""
Lens-enumeration baseline for maximum clique.

If (p, q) is the farthest pair of a clique M, all of M lies in the lens
L(p, q) (the intersection of the radius-|pq| disks around p and q), and the
points of a lens induce a cobipartite graph. Solving every lens of every
edge therefore finds a maximum clique.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src import config
from src.errors import ContractError, InputError
from src.geometry.primitives import CliqueResult, PointSet, is_clique, squared_distances
from src.solvers.cobipartite import CobipartiteInstance, max_clique_cobipartite

logger = logging.getLogger(__name__)

ALGORITHM = "lens-baseline"


@dataclass(frozen=True)
class Lens:
    p: int
    q: int
    members: tuple[int, ...]


def lens_points(ps: PointSet, p: int, q: int) -> Lens:
    """Members r with |rp|^2 <= |pq|^2 and |rq|^2 <= |pq|^2."""
    if not (0 <= p < len(ps) and 0 <= q < len(ps)):
        raise InputError(f"Lens endpoints out of range: ({p}, {q})")
    coords = ps.coords
    dpq = coords[p] - coords[q]
    r2 = dpq[0] * dpq[0] + dpq[1] * dpq[1]
    if r2 > 1.0:
        raise InputError(f"Points {p} and {q} are farther than 1 apart")
    dp = coords - coords[p]
    dq = coords - coords[q]
    inside = (dp[:, 0] * dp[:, 0] + dp[:, 1] * dp[:, 1] <= r2) & (
        dq[:, 0] * dq[:, 0] + dq[:, 1] * dq[:, 1] <= r2
    )
    return Lens(p, q, tuple(int(i) for i in np.flatnonzero(inside)))


def lens_to_cobipartite(ps: PointSet, lens: Lens) -> CobipartiteInstance:
    """
    Split lens members by the directed line p -> q: on or to the left goes to
    side_a, strictly right to side_b. Each half-lens has diameter <= |pq|.
    """
    coords = ps.coords
    members = np.asarray(lens.members, dtype=np.int64)
    px, py = coords[lens.p]
    qx, qy = coords[lens.q]
    rel = coords[members] - coords[lens.p]
    side = (qx - px) * rel[:, 1] - (qy - py) * rel[:, 0]
    side_a = tuple(int(i) for i in members[side >= 0])
    side_b = tuple(int(i) for i in members[side < 0])
    inst = CobipartiteInstance(side_a, side_b, ps)
    if config.checks_enabled():
        for half in (side_a, side_b):
            if not is_clique(ps, half):
                logger.error(f"Half-lens of ({lens.p}, {lens.q}) is not a clique")
                raise ContractError("Half-lens is not a clique")
    return inst


def max_clique_lens_baseline(
    ps: PointSet, ids: Sequence[int] | None = None, at_least: int = 0
) -> CliqueResult:
    """
    Maximum clique over all lenses of edges (p, q), p < q.

    ids restricts the search to a subset (results keep original ids). Lenses
    with no more members than the best clique so far, or fewer than at_least,
    are skipped; neither skip can lose a strictly larger clique. The first
    lens (lexicographically smallest pair) reaching the maximum wins ties.
    """
    subset = list(range(len(ps))) if ids is None else sorted(set(int(i) for i in ids))
    if not subset:
        return CliqueResult((), ALGORITHM, ("is_clique",))

    local = ps.subset(subset)
    d2 = squared_distances(local.coords)
    m = len(subset)
    best: tuple[int, ...] = (0,)
    best_pair: tuple[int, int] | None = None
    lenses_solved = 0

    for p in range(m):
        row = d2[p]
        for q in np.flatnonzero(row[p + 1 :] <= 1.0) + p + 1:
            r2 = row[q]
            inside = (row <= r2) & (d2[q] <= r2)
            count = int(inside.sum())
            if count <= len(best) or count < at_least:
                continue
            lens = Lens(p, int(q), tuple(int(i) for i in np.flatnonzero(inside)))
            clique = max_clique_cobipartite(lens_to_cobipartite(local, lens))
            lenses_solved += 1
            if clique.size > len(best):
                best = clique.indices
                best_pair = (p, int(q))

    logger.debug(
        f"max_clique_lens_baseline(): {m} points, {lenses_solved} lenses solved, "
        f"best={len(best)} from pair {best_pair}"
    )
    return CliqueResult.verified(ps, [subset[i] for i in best], ALGORITHM, ("koenig",))
