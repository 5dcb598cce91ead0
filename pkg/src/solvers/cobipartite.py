"""
Maximum clique of a cobipartite unit-disk subgraph.

Both sides are cliques, so the complement graph is bipartite and a maximum
clique is a maximum independent set of the complement. That set is the
complement of a minimum vertex cover, which Koenig's construction reads off a
maximum matching (Hopcroft-Karp).
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src import config
from src.errors import ContractError
from src.geometry.primitives import (
    CliqueResult,
    PointSet,
    cross_squared_distances,
    is_clique,
)

logger = logging.getLogger(__name__)

ALGORITHM = "cobipartite"


@dataclass(frozen=True, eq=False)
class CobipartiteInstance:
    side_a: tuple[int, ...]
    side_b: tuple[int, ...]
    ps: PointSet

    def check(self) -> None:
        """Raise ContractError unless the sides are disjoint cliques."""
        if set(self.side_a) & set(self.side_b):
            raise ContractError("Cobipartite sides overlap")
        for name, side in (("side_a", self.side_a), ("side_b", self.side_b)):
            if not is_clique(self.ps, side):
                logger.error(f"Cobipartite {name} is not a clique: {side}")
                raise ContractError(f"Cobipartite {name} is not a clique")


@dataclass(frozen=True)
class BipartiteGraph:
    left_size: int
    right_size: int
    adjacency: tuple[tuple[int, ...], ...]  # left id -> right ids

    @property
    def edge_count(self) -> int:
        return sum(len(adj) for adj in self.adjacency)


@dataclass(frozen=True)
class Matching:
    match_of_left: tuple[int | None, ...]

    @property
    def size(self) -> int:
        return sum(1 for r in self.match_of_left if r is not None)

    def match_of_right(self, right_size: int) -> list[int | None]:
        inverse: list[int | None] = [None] * right_size
        for left, right in enumerate(self.match_of_left):
            if right is not None:
                inverse[right] = left
        return inverse


def complement_bipartite(inst: CobipartiteInstance) -> BipartiteGraph:
    """Edge (a, b) iff the points side_a[a] and side_b[b] are farther than 1."""
    if config.checks_enabled():
        inst.check()
    if not inst.side_a or not inst.side_b:
        empty = tuple(() for _ in inst.side_a)
        return BipartiteGraph(len(inst.side_a), len(inst.side_b), empty)
    coords = inst.ps.coords
    far = (
        cross_squared_distances(coords[list(inst.side_a)], coords[list(inst.side_b)])
        > 1.0
    )
    adjacency = tuple(tuple(int(b) for b in np.flatnonzero(row)) for row in far)
    return BipartiteGraph(len(inst.side_a), len(inst.side_b), adjacency)


def max_matching(g: BipartiteGraph) -> Matching:
    """Hopcroft-Karp: BFS layering from free left vertices, then DFS augmentation."""
    match_left: list[int] = [-1] * g.left_size
    match_right: list[int] = [-1] * g.right_size
    inf = g.left_size + 1

    while True:
        # BFS: distance layers over left vertices; -1 stands for the free sink
        dist = [inf] * g.left_size
        queue = deque()
        for u in range(g.left_size):
            if match_left[u] == -1:
                dist[u] = 0
                queue.append(u)
        sink_dist = inf
        while queue:
            u = queue.popleft()
            if dist[u] >= sink_dist:
                continue
            for v in g.adjacency[u]:
                w = match_right[v]
                if w == -1:
                    if sink_dist == inf:
                        sink_dist = dist[u] + 1
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if sink_dist == inf:
            break

        # DFS along layers, iterative so deep paths cannot hit the recursion limit
        for root in range(g.left_size):
            if match_left[root] != -1:
                continue
            # Frames are (left vertex, next adjacency position)
            stack = [(root, 0)]
            while stack:
                u, pos = stack[-1]
                adj = g.adjacency[u]
                advanced = False
                while pos < len(adj):
                    v = adj[pos]
                    pos += 1
                    w = match_right[v]
                    if w == -1 and dist[u] + 1 == sink_dist:
                        # Augment along the left vertices on the stack
                        right = v
                        for x, _ in reversed(stack):
                            prev = match_left[x]
                            match_left[x] = right
                            match_right[right] = x
                            right = prev
                        stack = []
                        advanced = True
                        break
                    if w != -1 and dist[w] == dist[u] + 1:
                        stack[-1] = (u, pos)
                        stack.append((w, 0))
                        advanced = True
                        break
                if not advanced:
                    # Dead end: never revisit u in this phase
                    dist[u] = inf
                    stack.pop()

    return Matching(tuple(None if r == -1 else r for r in match_left))


def min_vertex_cover(g: BipartiteGraph, m: Matching) -> tuple[set[int], set[int]]:
    """
    Koenig's construction. Z = vertices reachable from free left vertices by
    alternating paths (any edge left-to-right, matched edge right-to-left);
    the cover is (L \\ Z) | (R & Z).
    """
    match_right = m.match_of_right(g.right_size)
    z_left = {u for u in range(g.left_size) if m.match_of_left[u] is None}
    z_right: set[int] = set()
    queue = deque(sorted(z_left))
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if v in z_right or m.match_of_left[u] == v:
                continue
            z_right.add(v)
            w = match_right[v]
            if w is not None and w not in z_left:
                z_left.add(w)
                queue.append(w)
    cover_left = set(range(g.left_size)) - z_left
    return cover_left, z_right


def max_clique_cobipartite(inst: CobipartiteInstance) -> CliqueResult:
    """Maximum clique of G(side_a | side_b) as the complement of a Koenig cover."""
    g = complement_bipartite(inst)
    m = max_matching(g)
    cover_left, cover_right = min_vertex_cover(g, m)

    keep_a = [inst.side_a[i] for i in range(g.left_size) if i not in cover_left]
    keep_b = [inst.side_b[j] for j in range(g.right_size) if j not in cover_right]
    expected = g.left_size + g.right_size - m.size
    if len(keep_a) + len(keep_b) != expected:
        logger.error(
            f"Koenig identity broken: {len(keep_a) + len(keep_b)} kept, "
            f"expected {expected} (matching {m.size})"
        )
        raise ContractError("Vertex cover size differs from matching size")

    return CliqueResult.verified(inst.ps, keep_a + keep_b, ALGORITHM, ("koenig",))


def solve_sides(
    ps: PointSet, side_a: Sequence[int], side_b: Sequence[int]
) -> CliqueResult:
    """Convenience wrapper building the instance from two id sequences."""
    return max_clique_cobipartite(CobipartiteInstance(tuple(side_a), tuple(side_b), ps))
