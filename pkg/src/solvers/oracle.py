"""
Exponential-time reference solvers used as ground truth in tests.

Built on networkx's pivoting Bron-Kerbosch enumeration so they share no code
with the production solvers.
"""

import logging

import networkx as nx
import numpy as np

from src.constants import ORACLE_MAX_POINTS
from src.errors import InputError
from src.geometry.primitives import CliqueResult, PointSet, adjacency_matrix

logger = logging.getLogger(__name__)

ALGORITHM = "oracle"


def _check_size(ps: PointSet) -> None:
    if len(ps) > ORACLE_MAX_POINTS:
        raise InputError(
            f"Oracle is limited to {ORACLE_MAX_POINTS} points, got {len(ps)}"
        )


def unit_disk_graph(ps: PointSet) -> nx.Graph:
    """G(P) as a networkx graph on ids 0..n-1."""
    adj = adjacency_matrix(ps)
    np.fill_diagonal(adj, False)
    g = nx.Graph()
    g.add_nodes_from(range(len(ps)))
    rows, cols = np.nonzero(np.triu(adj, k=1))
    g.add_edges_from(zip(rows.tolist(), cols.tolist()))
    return g


def _best_clique(g: nx.Graph) -> tuple[int, ...]:
    # Maximum size first, then the lexicographically smallest sorted id tuple
    best: tuple[int, ...] = ()
    for clique in nx.find_cliques(g):
        candidate = tuple(sorted(clique))
        if len(candidate) > len(best) or (
            len(candidate) == len(best) and candidate < best
        ):
            best = candidate
    return best


def brute_force_max_clique(ps: PointSet) -> CliqueResult:
    """
    Reference maximum clique by enumerating maximal cliques of G(P).

    Shares no solver code with the production algorithms, so tests can use it
    as ground truth on small instances.

    Args:
        ps: At most ORACLE_MAX_POINTS points

    Returns:
        CliqueResult of a maximum clique; empty for an empty point set

    Raises:
        InputError: If ps has more than ORACLE_MAX_POINTS points
    """
    _check_size(ps)
    if len(ps) == 0:
        return CliqueResult((), ALGORITHM, ("is_clique",))
    best = _best_clique(unit_disk_graph(ps))
    logger.debug(f"brute_force_max_clique(): n={len(ps)}, K={len(best)}")
    return CliqueResult.verified(ps, best, ALGORITHM)


def max_clique_containing(ps: PointSet, p: int) -> CliqueResult:
    """Maximum clique among those containing p: solve the neighbourhood of p."""
    _check_size(ps)
    if not 0 <= p < len(ps):
        raise InputError(f"Point {p} out of range for {len(ps)} points")
    g = unit_disk_graph(ps)
    neighbourhood = g.subgraph(list(g.neighbors(p)))
    best = _best_clique(neighbourhood) if neighbourhood.number_of_nodes() else ()
    return CliqueResult.verified(ps, (p, *best), ALGORITHM)
