"""Laman counting, the (2,3) pebble game and rigidity-matrix rank."""

from __future__ import annotations

from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from .graphs import Graph

LAMAN_MAX_VERTICES = 24
RANK_TOL = 1e-9


class GraphTooLargeError(ValueError):
    pass


def laman_count(graph: Graph) -> bool:
    """``|E| == 2|V| - 3``."""
    return graph.m == 2 * graph.n - 3


class PebbleGame:
    """The (2,3) pebble game; edges that cannot collect four pebbles are dependent."""

    def __init__(self, n: int):
        self.pebbles = [2] * n
        self.out: List[List[int]] = [[] for _ in range(n)]

    def _find_pebble(self, root: int, keep: int) -> bool:
        parent: Dict[int, int] = {root: -1, keep: -1}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if self.pebbles[y]:
                    # reverse the path root -> ... -> y
                    self.pebbles[y] -= 1
                    self.pebbles[root] += 1
                    while y != root:
                        p = parent[y]
                        self.out[p].remove(y)
                        self.out[y].append(p)
                        y = p
                    return True
                stack.append(y)
        return False

    def add_edge(self, u: int, v: int) -> bool:
        """Try to insert edge ``u-v``; returns False if it is dependent."""
        while self.pebbles[u] < 2:
            if not self._find_pebble(u, v):
                return False
        while self.pebbles[v] < 2:
            if not self._find_pebble(v, u):
                return False
        self.pebbles[u] -= 1
        self.out[u].append(v)
        return True


def independent_edges(graph: Graph) -> List[bool]:
    game = PebbleGame(graph.n)
    return [game.add_edge(a, b) for a, b in graph.edge_indices()]


def laman_full(graph: Graph) -> bool:
    """Minimal generic rigidity: Laman count plus independence of every edge."""
    if graph.n > LAMAN_MAX_VERTICES:
        raise GraphTooLargeError(f"laman_full is limited to {LAMAN_MAX_VERTICES} vertices")
    if not laman_count(graph):
        return False
    return all(independent_edges(graph))


def rigidity_matrix(graph: Graph, config: Mapping[str, Tuple[float, float]] | np.ndarray) -> np.ndarray:
    """Row per edge with ``p_a - p_b`` in a's columns and ``p_b - p_a`` in b's."""
    if isinstance(config, np.ndarray):
        pts = np.asarray(config, dtype=float).reshape(graph.n, 2)
    else:
        pts = np.array([config[v] for v in graph.vertices], dtype=float)
    R = np.zeros((graph.m, 2 * graph.n))
    for row, (a, b) in enumerate(graph.edge_indices()):
        d = pts[a] - pts[b]
        R[row, 2 * a : 2 * a + 2] = d
        R[row, 2 * b : 2 * b + 2] = -d
    return R


def numerical_rank(M: np.ndarray, tol: float = RANK_TOL) -> int:
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def generic_rank(graph: Graph, trials: int = 3, seed: int = 0) -> int:
    """Max rigidity-matrix rank over random configurations in the unit square.

    Trial ``t`` draws from ``numpy.random.default_rng(seed + t)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best = 0
    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        pts = rng.random((graph.n, 2))
        best = max(best, numerical_rank(rigidity_matrix(graph, pts)))
    return best


def dof(graph: Graph, trials: int = 3, seed: int = 0) -> int:
    """Internal degrees of freedom: ``2|V| - 3 - generic_rank``."""
    return 2 * graph.n - 3 - generic_rank(graph, trials, seed)


def trivial_motions(graph: Graph, config: Mapping[str, Tuple[float, float]]) -> np.ndarray:
    """Columns: x-translation, y-translation, rotation about the origin."""
    pts = np.array([config[v] for v in graph.vertices], dtype=float)
    tx = np.tile([1.0, 0.0], graph.n)
    ty = np.tile([0.0, 1.0], graph.n)
    rot = np.column_stack([-pts[:, 1], pts[:, 0]]).ravel()
    return np.column_stack([tx, ty, rot])
