from __future__ import annotations

import itertools

import pytest
from hypothesis import given

from fibercox.complexes import Graph, cycle_graph
from fibercox.cubical import (
    CubeComplex,
    check_5_large,
    check_no_disconnecting_cubes,
    check_no_isolated_corners,
    cube_link,
    cubical_distance,
    cubical_neighborhood,
    cycle_complex,
    distance_matrix,
    graph_complex,
    minimal_cube,
    single_cube,
    vertex_link,
)
from fibercox.errors import PreconditionError
from fibercox.lemmas import check_cube_links

from .conftest import graphs


def test_cycle_complex():
    X = cycle_complex(5)
    assert X.f_vector() == [5, 5]
    assert check_5_large(X).status == "certified"
    with pytest.raises(PreconditionError):
        cycle_complex(4)


def test_cube_closure_counts():
    for d in range(5):
        X = single_cube(d)
        assert X.f_vector() == [2 ** (d - k) * len(list(itertools.combinations(range(d), k))) for k in range(d + 1)]


def test_rejects_malformed_cubes():
    with pytest.raises(PreconditionError):
        CubeComplex(["a", "b"], [(1, ["a"])])
    with pytest.raises(PreconditionError):
        CubeComplex(["a", "b"], [(1, ["a", "c"])])
    with pytest.raises(PreconditionError):
        CubeComplex(["a", "b"], [(1, ["a", "a"])])


def test_json_round_trip(q5):
    X = q5.complex
    Y = CubeComplex.from_json(X.to_json())
    assert Y.f_vector() == X.f_vector()
    assert {Y.labels(Y.cube_mask(c)) for c in Y.cube_ids()} == {X.labels(X.cube_mask(c)) for c in X.cube_ids()}


def test_edges_are_one_cubes(q5):
    X = q5.complex
    edges = {X.cube_mask(c) for c in X.cube_ids() if X.cube_dim(c) == 1}
    adj = {(1 << a) | (1 << b) for a in range(X.n) for b in range(X.n) if X.edge_adjacency[a] >> b & 1}
    assert edges == adj


# -- distance and minimal cubes -------------------------------------------------


def test_distance_examples():
    X = cycle_complex(5)
    assert cubical_distance(X, "x1", "x2") == 1
    assert cubical_distance(X, "x1", "x3") == 2
    sq = single_cube(2)
    assert cubical_distance(sq, "c00", "c11") == 1


@given(graphs(min_n=2, max_n=8))
def test_distance_is_a_metric(G):
    X = graph_complex(G)
    D = distance_matrix(X)
    n = X.n
    for a in range(n):
        assert D[a][a] == 0
        for b in range(n):
            assert D[a][b] == D[b][a]
            if D[a][b] >= 0:
                for c in range(n):
                    if D[b][c] >= 0:
                        assert 0 <= D[a][c] <= D[a][b] + D[b][c]


def test_minimal_cube_examples(q5):
    X = cycle_complex(5)
    assert minimal_cube(X, ["x1"]).vertices == {"x1"}
    assert minimal_cube(X, ["x1", "x2"]).vertices == {"x1", "x2"}
    Q = q5.complex
    sq = next(c for c in Q.cube_ids() if Q.cube_dim(c) == 2)
    arr = Q.cube_array(sq)
    diag = [Q.vertices[arr[0]], Q.vertices[arr[3]]]
    assert Q.mask(minimal_cube(Q, diag).vertices) == Q.cube_mask(sq)


def test_minimal_cube_matches_intersection(q5):
    X = q5.complex
    for cid in X.cube_ids():
        verts = sorted(X.labels(X.cube_mask(cid)))
        for r in (1, 2):
            for S in itertools.combinations(verts, r):
                m = X.mask(S)
                inter = X.full_mask
                for c in X.cube_ids():
                    if X.cube_mask(c) & m == m:
                        inter &= X.cube_mask(c)
                assert X.mask(minimal_cube(X, S).vertices) == inter


# -- links ------------------------------------------------------------------


def test_vertex_links(q5):
    lk = vertex_link(cycle_complex(5), "x1")
    assert lk.n == 2 and lk.f_vector() == [2]
    Q = q5.complex
    for v in Q.vertices:
        lk = vertex_link(Q, v)
        assert lk.n == 5 and lk.f_vector() == [5, 5]


def test_cube_links_agree_with_vertex_links(q5):
    assert check_cube_links(q5.complex).passed


def test_link_of_top_cube_is_empty(q5):
    Q = q5.complex
    top = next(c for c in Q.cube_ids() if Q.cube_dim(c) == 2)
    assert cube_link(Q, Q.cube(top)).is_empty()


# -- corners and disconnection ------------------------------------------------------


def test_isolated_corner_examples(q5):
    ok, (cube, v) = check_no_isolated_corners(single_cube(2))
    assert not ok and v in cube.vertices
    assert check_no_isolated_corners(cycle_complex(5))[0]
    assert check_no_isolated_corners(q5.complex)[0]


def test_disconnecting_cube_examples(q5):
    seg = graph_complex(Graph(["a", "b", "c"], [("a", "b"), ("b", "c")]))
    ok, cube = check_no_disconnecting_cubes(seg)
    assert not ok and cube.vertices == {"b"}
    assert check_no_disconnecting_cubes(cycle_complex(5))[0]
    assert check_no_disconnecting_cubes(q5.complex)[0]


# -- neighborhoods and largeness -----------------------------------------------------


def test_neighborhood_examples(q5):
    X = cycle_complex(5)
    N1 = cubical_neighborhood(X, "x1", 1)
    assert set(N1.vertices) == {"x5", "x1", "x2"} and N1.f_vector() == [3, 2]
    N2 = cubical_neighborhood(X, "x1", 2)
    assert set(N2.vertices) == {"x4", "x5", "x1", "x2", "x3"} and N2.f_vector() == [5, 4]
    N = cubical_neighborhood(q5.complex, q5.complex.vertices[0], 2)
    assert N.n <= 31 and N.dimension() == 2


def test_largeness_examples(q5):
    assert check_5_large(cycle_complex(5)).status == "certified"
    c4 = cycle_complex(4, minimum=4)
    cert = check_5_large(c4)
    assert cert.status == "refused"
    assert set(cert.neighborhoods.values()) == {"non-contractible"}
    Q = q5.complex
    cert = check_5_large(Q, vertices=[Q.vertices[0]])
    assert cert.locally_5_large
    # the quotient's 2-neighborhood carries homology, so it is not contractible
    assert cert.neighborhoods == {Q.vertices[0]: "non-contractible"}


def test_vertex_links_of_graph_are_discrete():
    X = graph_complex(cycle_graph(6))
    for v in X.vertices:
        assert vertex_link(X, v).f_vector() == [2]
