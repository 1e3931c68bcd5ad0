import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from exgraph.graph import Graph, GraphError, apply_permutation, canonical_form, edge_count, is_connected
from exgraph.oracle import enumerate_graphs, random_connected_graph
from exgraph.sbp import (
    BfsCertificate,
    bfs_star_renumber,
    bfs_star_renumbering,
    certificate,
    check_bfs,
    check_bfs_ascending_variant,
    check_bfs_plus,
    check_bfs_star,
    checker,
    compute_parents,
    compute_weights,
)

from known_graphs import C4_BFS, P4_LABELINGS, P4_SECOND, P4_THIRD, SIX, SIX_WEIGHTS, STAR_CENTER_1, THIRTEEN


def test_compute_parents_examples():
    assert compute_parents(P4_SECOND) == (1, 1, 2)
    assert compute_parents(Graph(3, [(2, 3)])) is None
    assert compute_parents(C4_BFS) == (1, 1, 2)
    assert compute_parents(Graph(1, [])) == ()


def test_check_bfs_examples():
    assert all(check_bfs(g) for g in P4_LABELINGS)
    # the path 2-1-4-3
    assert not check_bfs(Graph(4, [(1, 2), (1, 4), (3, 4)]))
    assert check_bfs(Graph(1, []))


def test_p4_has_three_bfs_labelings():
    path = Graph(4, [(1, 2), (2, 3), (3, 4)])
    labeled = {apply_permutation(path, p) for p in itertools.permutations(range(1, 5))}
    assert len(labeled) == 12
    assert {g for g in labeled if check_bfs(g)} == set(P4_LABELINGS)


def test_check_bfs_plus_examples():
    assert [check_bfs_plus(g) for g in P4_LABELINGS] == [False, True, True]
    assert check_bfs_plus(C4_BFS)
    assert check_bfs_plus(STAR_CENTER_1)


def test_compute_weights_examples():
    assert compute_weights(SIX[0], compute_parents(SIX[0]))[1:4] == (5, 2, 1)
    w = compute_weights(C4_BFS, compute_parents(C4_BFS))
    assert (w[1], w[2]) == (2, 1)
    assert w == (4, 2, 1, 1)
    assert compute_weights(Graph(1, []), ()) == (1,)


def test_check_bfs_star_examples():
    assert [check_bfs_star(g) for g in SIX] == [True, False, False, False, False, False]
    assert [check_bfs_star(g) for g in P4_LABELINGS] == [False, True, False]
    assert certificate(P4_THIRD).weights[1:] == (1, 2, 1)
    assert check_bfs_star(C4_BFS)


def test_six_enumeration_weights():
    for g, want in zip(SIX, SIX_WEIGHTS):
        assert check_bfs(g)
        assert certificate(g).weights[1:4] == want


def test_ascending_variant_examples():
    assert not check_bfs_ascending_variant(C4_BFS)
    assert check_bfs_ascending_variant(Graph(2, [(1, 2)]))
    assert check_bfs_ascending_variant(SIX[5])


def test_c4_no_ascending_labeling():
    c4 = Graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
    labeled = {apply_permutation(c4, p) for p in itertools.permutations(range(1, 5))}
    assert len(labeled) == 3
    assert not any(check_bfs(g) and check_bfs_ascending_variant(g) for g in labeled)
    assert sum(check_bfs(g) for g in labeled) == 1


def test_certificate_format():
    cert = certificate(P4_SECOND)
    assert isinstance(cert, BfsCertificate)
    assert cert.format().splitlines() == ["p: 1 1 2", "deg: 2 2 1 1", "w: 4 2 1 1"]
    assert cert.deg_max == 2
    assert certificate(Graph(3, [(2, 3)])) is None


def test_checker_names():
    assert checker("bfs*") is check_bfs_star
    assert checker("bfs-star") is check_bfs_star
    with pytest.raises(ValueError):
        checker("lex")


@pytest.mark.parametrize("n", range(1, 7))
def test_nesting_and_certificate_invariants(n):
    for g in enumerate_graphs(n):
        b, bp, bs = check_bfs(g), check_bfs_plus(g), check_bfs_star(g)
        assert not bs or bp
        assert not bp or b
        if b:
            cert = certificate(g)
            assert all(p < j for j, p in enumerate(cert.parents, start=2))
            assert list(cert.parents) == sorted(cert.parents)
            assert cert.weights[0] == n
            assert min(cert.weights) >= 1
            assert sum(cert.degrees) == 2 * edge_count(g)
            assert is_connected(g)


def test_renumber_examples():
    assert bfs_star_renumber(SIX[2]) == SIX[0]
    assert bfs_star_renumber(SIX[0]) == SIX[0]
    assert bfs_star_renumber(THIRTEEN) == THIRTEEN
    with pytest.raises(GraphError):
        bfs_star_renumber(Graph(3, [(1, 2)]))


def test_renumber_thirteen_vertex_relabelings():
    rng = random.Random(13)
    for _ in range(30):
        image = list(range(1, 14))
        rng.shuffle(image)
        h = bfs_star_renumber(apply_permutation(THIRTEEN, image))
        assert check_bfs_star(h)
        assert sorted(map(sorted, _degree_profile(h))) == sorted(map(sorted, _degree_profile(THIRTEEN)))


def _degree_profile(g):
    # vertex degree together with neighbour degrees; an isomorphism invariant
    from exgraph.graph import degrees
    d = degrees(g)
    return [[d[v - 1]] + sorted(d[u - 1] for u in g.neighbors(v)) for v in range(1, g.n + 1)]


@st.composite
def connected_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_connected_graph(n, random.Random(seed))


@settings(max_examples=150, deadline=None)
@given(connected_graphs())
def test_renumber_property(g):
    perm = bfs_star_renumbering(g)
    h = apply_permutation(g, perm)
    assert h == bfs_star_renumber(g)
    assert check_bfs_star(h)
    assert canonical_form(h) == canonical_form(g)
