"""Unit tests for Hopcroft-Karp matching and the Koenig-based cobipartite solver."""

import networkx as nx
import numpy as np
import pytest

from src.errors import ContractError
from src.geometry.primitives import PointSet
from src.solvers.cobipartite import (
    BipartiteGraph,
    CobipartiteInstance,
    complement_bipartite,
    max_clique_cobipartite,
    max_matching,
    min_vertex_cover,
    solve_sides,
)


@pytest.fixture
def line_points():
    """Points on the x-axis: 0, 0.3 | 0.9, 1.25. Only (0, 1.25) is a non-edge."""
    return PointSet.from_points([(0.0, 0.0), (0.3, 0.0), (0.9, 0.0), (1.25, 0.0)])


def _random_bipartite(rng, left, right, density):
    adjacency = tuple(
        tuple(int(v) for v in np.flatnonzero(rng.uniform(size=right) < density))
        for _ in range(left)
    )
    return BipartiteGraph(left, right, adjacency)


def test_complement_bipartite_edges(line_points):
    """Test complement edges join cross pairs farther than 1."""
    inst = CobipartiteInstance((0, 1), (2, 3), line_points)
    g = complement_bipartite(inst)
    assert g.adjacency == ((1,), ())
    assert g.edge_count == 1


def test_max_clique_cobipartite_line(line_points):
    """Test the clique drops the one endpoint the Koenig cover picks."""
    result = solve_sides(line_points, (0, 1), (2, 3))
    assert result.indices == (1, 2, 3)
    assert result.checks == ("koenig", "is_clique")


def test_empty_side_returns_other_side(line_points):
    """Test an empty side leaves the other clique intact."""
    result = solve_sides(line_points, (0, 1, 2), ())
    assert result.indices == (0, 1, 2)
    assert solve_sides(line_points, (), ()).size == 0


def test_far_apart_sides_pick_one_side():
    """Test complete complement leaves the larger side."""
    ps = PointSet.from_points(
        [(0.0, 0.0), (0.0, 0.5), (0.0, 0.2), (1.5, 0.0), (1.5, 0.5)]
    )
    result = solve_sides(ps, (0, 1, 2), (3, 4))
    assert result.indices == (0, 1, 2)


def test_overlapping_sides_rejected(line_points):
    """Test a point on both sides is a contract violation."""
    with pytest.raises(ContractError, match="overlap"):
        max_clique_cobipartite(CobipartiteInstance((0, 1), (1, 2), line_points))


def test_non_clique_side_rejected(line_points):
    """Test sides must be cliques."""
    with pytest.raises(ContractError, match="not a clique"):
        max_clique_cobipartite(CobipartiteInstance((0, 3), (1,), line_points))


def test_max_matching_hand_graph():
    """Test a perfect matching is found on a small graph."""
    g = BipartiteGraph(3, 3, ((0, 1), (0,), (1, 2)))
    m = max_matching(g)
    assert m.size == 3
    assert m.match_of_left == (1, 0, 2)
    assert m.match_of_right(3) == [1, 0, 2]


def test_max_matching_needs_augmenting_path():
    """Test a greedy first choice is repaired by augmentation."""
    # Left 0 can take right 0 or 1; left 1 only right 0
    g = BipartiteGraph(2, 2, ((0, 1), (0,)))
    assert max_matching(g).size == 2


def test_min_vertex_cover_size_equals_matching():
    """Test Koenig's cover covers every edge with |matching| vertices."""
    g = BipartiteGraph(4, 3, ((0,), (0, 1), (1,), ()))
    m = max_matching(g)
    cover_left, cover_right = min_vertex_cover(g, m)
    assert len(cover_left) + len(cover_right) == m.size == 2
    for u, adj in enumerate(g.adjacency):
        for v in adj:
            assert u in cover_left or v in cover_right


def test_max_matching_agrees_with_networkx():
    """Test matching sizes against networkx on random bipartite graphs."""
    rng = np.random.default_rng(11)
    for _ in range(100):
        left, right = rng.integers(0, 12, size=2)
        g = _random_bipartite(rng, int(left), int(right), rng.uniform(0.05, 0.6))
        nxg = nx.Graph()
        top = [("L", u) for u in range(g.left_size)]
        nxg.add_nodes_from(top)
        nxg.add_nodes_from(("R", v) for v in range(g.right_size))
        nxg.add_edges_from(
            (("L", u), ("R", v)) for u, adj in enumerate(g.adjacency) for v in adj
        )
        expected = len(nx.bipartite.hopcroft_karp_matching(nxg, top)) // 2
        m = max_matching(g)
        assert m.size == expected
        cover_left, cover_right = min_vertex_cover(g, m)
        assert len(cover_left) + len(cover_right) == expected
