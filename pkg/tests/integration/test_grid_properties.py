"""Exhaustive checks of grid buckets, coverage, neighbour counts and P_C sizes."""

from collections import Counter

import numpy as np
import pytest

from src.constants import MAX_NEIGHBOR_CELLS
from src.geometry.primitives import squared_distances
from src.grid.index import build_grid, key_of, neighbors
from src.instances.generators import gen_bounded_k, gen_uniform
from src.solvers.general import max_clique_general


def _instance(seed: int):
    n = 20 + (seed * 97) % 481
    if seed % 2:
        return gen_bounded_k(n, 8, 2.5, seed=seed)
    return gen_uniform(n, 1.0 + seed % 10, seed=seed)


@pytest.mark.parametrize("seed", range(50))
def test_grid_properties(seed):
    """Test unique buckets, unit-disk coverage by N(C) and at most 25 reverse cells."""
    ps = _instance(seed)
    g = build_grid(ps)

    # Every point sits in exactly one bucket, the one its key names
    owners = Counter(i for key in g.keys() for i in g.bucket(key))
    assert sorted(owners) == list(range(len(ps)))
    assert set(owners.values()) == {1}
    for key in g.keys():
        assert all(key_of(ps[i]) == key for i in g.bucket(key))

    # Every point within distance 1 of q is in a cell of N(key(q))
    keys = [key_of(p) for p in ps]
    close = squared_distances(ps.coords) <= 1.0
    for q in range(len(ps)):
        block = neighbors(keys[q], g)
        assert all(keys[int(r)] in block for r in np.flatnonzero(close[q]))

    # Each stored cell is in N(C) for at most 25 cells C
    reverse = Counter(k for key in g.keys() for k in neighbors(key, g))
    assert max(reverse.values()) <= MAX_NEIGHBOR_CELLS

    # The P_C sizes sum to at most 25 n
    assert sum(g.pc_sizes.values()) <= MAX_NEIGHBOR_CELLS * len(ps)


@pytest.mark.parametrize("seed", range(5))
def test_heavy_cells_shrink_as_k_grows(seed):
    """Test every decision of a bounded-K search sees at most 25 n / k heavy cells."""
    ps = gen_bounded_k(2000, 8, 3.0, seed=seed)
    clique, trace = max_clique_general(ps)
    assert clique.size == 8
    for step in trace.probes:
        assert step.heavy_cells * step.k <= MAX_NEIGHBOR_CELLS * len(ps)
