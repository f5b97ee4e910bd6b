import random

import numpy as np
import pytest

from rigidlab import graphs
from rigidlab.graphs import Graph
from rigidlab.rigidity import (
    GraphTooLargeError,
    PebbleGame,
    dof,
    generic_rank,
    independent_edges,
    laman_count,
    laman_full,
    rigidity_matrix,
    trivial_motions,
)

from .oracles import graph_from_indices, laman_sparse_by_subsets


def two_triangles_sharing_vertex():
    return Graph("abcde", [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d"), ("d", "e"), ("c", "e")])


def test_laman_count_examples():
    assert laman_count(graphs.triangle())
    assert laman_count(graphs.complete_bipartite(3, 3))
    assert not laman_count(graphs.complete(4))


def test_laman_full_examples():
    assert laman_full(graphs.complete_bipartite(3, 3))
    pendant = Graph("abcd", [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")])
    assert not laman_full(pendant)
    assert not laman_full(two_triangles_sharing_vertex())
    assert laman_full(graphs.moser_spindle())


def test_laman_full_rejects_count_ok_but_dependent():
    # K4 plus a pendant path: 6 + 1 = 7 = 2*5 - 3 edges, but K4 is overbraced
    g = graphs.complete(4)
    g = Graph(list(g.vertices) + ["u5"], list(g.edges) + [("u4", "u5")])
    assert laman_count(g)
    assert not laman_full(g)


def test_laman_full_size_limit():
    with pytest.raises(GraphTooLargeError):
        laman_full(graphs.path(25))


def test_pebble_game_keeps_pebble_count():
    g = graphs.complete_bipartite(3, 3)
    game = PebbleGame(g.n)
    for a, b in g.edge_indices():
        assert game.add_edge(a, b)
    # each accepted edge consumes one pebble; three remain
    assert sum(game.pebbles) == 2 * g.n - g.m == 3


def test_pebble_game_matches_subset_oracle_on_random_graphs():
    rng = random.Random(4)
    for _ in range(300):
        n = rng.randint(2, 8)
        edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.5]
        g = graph_from_indices(n, edges)
        sparse = laman_sparse_by_subsets(n, edges)
        assert all(independent_edges(g)) == sparse
        assert laman_full(g) == (sparse and len(edges) == 2 * n - 3)


@pytest.mark.parametrize(
    "graph,rank",
    [(graphs.triangle(), 3), (graphs.complete_bipartite(3, 3), 9), (graphs.cycle(4), 4), (graphs.path(3), 2)],
)
def test_generic_rank_examples(graph, rank):
    assert generic_rank(graph, trials=3, seed=0) == rank


def test_dof_examples():
    assert dof(graphs.triangle()) == 0
    assert dof(graphs.cycle(4)) == 1
    assert dof(graphs.path(3)) == 1
    assert dof(graphs.complete_bipartite(4, 4)) == 0


def test_rigidity_matrix_shape_and_rows():
    g = graphs.triangle()
    cfg = {"u1": (0.0, 0.0), "u2": (1.0, 0.0), "u3": (0.5, 0.8)}
    R = rigidity_matrix(g, cfg)
    assert R.shape == (3, 6)
    np.testing.assert_array_equal(R[0], [-1.0, 0.0, 1.0, 0.0, 0.0, 0.0])


def test_trivial_motions_in_null_space():
    rng = np.random.default_rng(9)
    for g in (graphs.complete_bipartite(3, 3), graphs.moser_spindle(), graphs.complete(5)):
        cfg = {v: tuple(p) for v, p in zip(g.vertices, rng.uniform(-2, 2, size=(g.n, 2)).tolist())}
        residual = rigidity_matrix(g, cfg) @ trivial_motions(g, cfg)
        assert np.max(np.abs(residual)) < 1e-9


def test_generic_rank_monotone_under_edge_addition():
    rng = random.Random(2)
    for _ in range(20):
        n = rng.randint(3, 7)
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        rng.shuffle(pairs)
        prev = 0
        for k in range(1, len(pairs) + 1):
            r = generic_rank(graph_from_indices(n, pairs[:k]), trials=2, seed=k)
            assert r >= prev
            prev = r


def test_laman_graphs_reach_full_rank():
    rng = random.Random(6)
    found = 0
    while found < 40:
        n = rng.randint(2, 8)
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        edges = rng.sample(pairs, min(len(pairs), 2 * n - 3))
        g = graph_from_indices(n, edges)
        if laman_full(g):
            found += 1
            assert generic_rank(g) == 2 * n - 3
        assert not laman_full(g) or laman_count(g)
