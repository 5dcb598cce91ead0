"""Unit tests for the grid-localised decision procedure and the size search."""

import numpy as np
import pytest

from src.errors import ContractError, InputError
from src.geometry.primitives import PointSet, is_clique
from src.grid.index import build_grid
from src.instances.pointfile import read_points
from src.solvers.general import (
    DecisionOutcome,
    DecisionStep,
    SearchTrace,
    decide_clique,
    max_clique_general,
)


@pytest.fixture
def straddling_square():
    """Four points around (0.5, 0.5), one per cell, all pairwise close."""
    return PointSet.from_points(
        [(0.45, 0.45), (0.55, 0.45), (0.45, 0.55), (0.55, 0.55)]
    )


@pytest.fixture
def packed_cell():
    """Ten points inside cell (0, 0)."""
    return PointSet.from_points([(0.01 * i, 0.02 * i) for i in range(10)])


# decide_clique


def test_decide_bucket_case(packed_cell):
    """Test a bucket with at least k points is returned truncated to k."""
    outcome = decide_clique(packed_cell, build_grid(packed_cell), 5)
    assert outcome.found
    assert outcome.case == "bucket"
    assert outcome.witness.indices == (0, 1, 2, 3, 4)
    assert outcome.witness.checks == ("bucket", "is_clique")


def test_decide_neighborhood_case(straddling_square):
    """Test a clique spread over four cells is found through P_C."""
    g = build_grid(straddling_square)
    outcome = decide_clique(straddling_square, g, 2)
    assert outcome.found
    assert outcome.case == "neighborhood"
    assert outcome.witness.indices == (0, 1, 2, 3)
    assert outcome.heavy_cells == 4
    assert outcome.solved_cells == 1


def test_decide_no_clique():
    """Test two far triangles have no 4-clique."""
    ps = read_points("tests/fixtures/two_triangles.txt")
    outcome = decide_clique(ps, build_grid(ps), 4)
    assert not outcome.found
    assert outcome.witness is None
    assert outcome.case == "none"


def test_decide_k_above_n_short_circuits(straddling_square):
    """Test k > n fails without looking at any cell."""
    outcome = decide_clique(straddling_square, build_grid(straddling_square), 5)
    assert not outcome.found
    assert outcome.heavy_cells == 0


def test_decide_reuses_cache(straddling_square):
    """Test a second decision on the same grid reads P_C results from the cache."""
    g = build_grid(straddling_square)
    cache = {}
    first = decide_clique(straddling_square, g, 3, cache)
    second = decide_clique(straddling_square, g, 3, cache)
    assert first.solved_cells == 1
    assert second.solved_cells == 0
    assert second.found
    assert second.witness.indices == first.witness.indices


def test_decide_rejects_bad_k(straddling_square):
    """Test k must be positive."""
    with pytest.raises(InputError, match="k must be >= 1"):
        decide_clique(straddling_square, build_grid(straddling_square), 0)


def test_decide_rejects_mismatched_grid(straddling_square, packed_cell):
    """Test the grid must be built from the same point set."""
    with pytest.raises(InputError, match="Grid built for"):
        decide_clique(straddling_square, build_grid(packed_cell), 1)


def test_decision_outcome_consistency():
    """Test found without a witness is rejected."""
    with pytest.raises(ContractError):
        DecisionOutcome(True, None)


# max_clique_general


def test_general_straddling_square(straddling_square):
    """Test the search returns the full square and a monotone trace."""
    result, trace = max_clique_general(straddling_square)
    assert result.indices == (0, 1, 2, 3)
    assert result.algorithm == "general"
    assert trace.K == 4
    assert trace.is_monotone()
    assert [p.k for p in trace.probes] == [1, 2, 4, 8, 6, 5]


def test_general_packed_cell(packed_cell):
    """Test a single crowded cell gives K = n."""
    result, trace = max_clique_general(packed_cell)
    assert result.size == 10
    assert trace.K == 10


def test_general_two_triangles():
    """Test two separated triangles give K = 3."""
    ps = read_points("tests/fixtures/two_triangles.txt")
    result, trace = max_clique_general(ps)
    assert result.size == 3
    assert is_clique(ps, result.indices)
    assert trace.is_monotone()


def test_general_single_point():
    """Test one point is a clique of size 1."""
    result, trace = max_clique_general(PointSet.from_points([(3.0, 4.0)]))
    assert result.indices == (0,)
    assert trace.K == 1


def test_general_rejects_empty_and_duplicates():
    """Test empty inputs and coincident points are refused."""
    with pytest.raises(InputError, match="at least one point"):
        max_clique_general(PointSet(np.empty((0, 2))))
    with pytest.raises(InputError, match="Duplicate points"):
        max_clique_general(PointSet.from_points([(0.0, 0.0), (0.0, 0.0)]))


def test_search_trace_as_dicts():
    """Test decision steps serialise with rounded timings."""
    trace = SearchTrace([DecisionStep(1, True, 0.12345, "bucket", 0)], K=1)
    assert trace.as_dicts() == [{"k": 1, "found": True, "elapsed_ms": 0.123}]


def test_search_trace_detects_non_monotone():
    """Test a success above K breaks monotonicity."""
    steps = [DecisionStep(k, True, 0.0, "bucket", 0) for k in (1, 2)]
    trace = SearchTrace(steps, K=1)
    assert not trace.is_monotone()
