from __future__ import annotations

import itertools

import pytest
from hypothesis import given

from fibercox.bitset import iter_bits
from fibercox.collapse import collapse
from fibercox.complexes import (
    Graph,
    SimplicialComplex,
    chordless_squares,
    closest_face_map,
    combinatorial_ball,
    combinatorial_sphere,
    cycle_graph,
    dominated_core,
    full_subcomplex,
    is_flag,
    is_k_large,
    link,
    link_simplex_iso_check,
    maximal_cliques,
    same_complex,
    sphere_filtration,
)
from fibercox.errors import PreconditionError
from fibercox.homology import complex_homology
from fibercox.thickening import same_homology

from .conftest import complexes, graphs


def flag_c5():
    return SimplicialComplex.from_graph(cycle_graph(5))


def triangle():
    return SimplicialComplex.simplex(["a", "b", "c"])


# -- graphs and cliques -----------------------------------------------------


def test_graph_rejects_loops_and_unknown_endpoints():
    with pytest.raises(PreconditionError):
        Graph(["a"], [("a", "a")])
    with pytest.raises(PreconditionError):
        Graph(["a"], [("a", "b")])


@given(graphs())
def test_maximal_cliques_match_brute_force(G):
    n = len(G.vertices)
    cliques = []
    for r in range(1, n + 1):
        for c in itertools.combinations(range(n), r):
            if all(G.adj[a] >> b & 1 for a, b in itertools.combinations(c, 2)):
                cliques.append(sum(1 << i for i in c))
    maximal = {m for m in cliques if not any(o != m and o & m == m for o in cliques)}
    assert set(maximal_cliques(G.adj, (1 << n) - 1)) == maximal


# -- flag and explicit modes ------------------------------------------------


def test_is_flag_examples(t_c5):
    assert is_flag(flag_c5())[0]
    hollow = SimplicialComplex.explicit(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]])
    ok, w = is_flag(hollow)
    assert not ok and set(w) == {"a", "b", "c"}
    assert is_flag(t_c5.complex.expanded())[0]


@given(graphs(max_n=8))
def test_flag_and_expansion_agree(G):
    K = SimplicialComplex.from_graph(G)
    E = K.expanded()
    assert same_complex(K, E)
    assert K.f_vector() == E.f_vector()
    for m in K.simplex_masks():
        assert E.contains_mask(m)


@given(complexes())
def test_json_round_trip(K):
    assert same_complex(SimplicialComplex.from_json(K.to_json()), K)


# -- largeness ------------------------------------------------------------------


def test_is_k_large_examples(t_c5):
    ok, w = is_k_large(SimplicialComplex.from_graph(cycle_graph(4)), 5)
    assert not ok and len(w) == 4
    assert is_k_large(flag_c5(), 5)[0]
    assert is_k_large(t_c5.complex, 5)[0]


def test_k_large_needs_k_at_least_5():
    with pytest.raises(PreconditionError):
        is_k_large(flag_c5(), 4)


@given(graphs(max_n=8))
def test_chordless_square_finder_is_exhaustive(G):
    n = len(G.vertices)
    brute = set()
    for a, b, c, d in itertools.permutations(range(n), 4):
        e = lambda x, y: bool(G.adj[x] >> y & 1)  # noqa: E731
        if e(a, b) and e(b, c) and e(c, d) and e(d, a) and not e(a, c) and not e(b, d):
            brute.add(frozenset((a, b, c, d)))
    found = {frozenset(q) for q in chordless_squares(G.adj)}
    assert found == brute


# -- links, full subcomplexes, spheres and balls -----------------------------------


def test_link_examples(t_c5):
    lk = link(flag_c5(), ["x1"])
    assert set(lk.vertices) == {"x2", "x5"} and lk.f_vector() == [2]
    K = t_c5.complex
    assert same_complex(link(K, []), K)
    top = next(f for f in K.facets() if len(f) == 4)
    assert link(K, top).is_empty()


def test_link_of_link_identity_cases(t_c5):
    K = t_c5.complex
    for m in K.simplex_masks():
        s = K.labels(m)
        assert link_simplex_iso_check(K, s, s)
        assert link_simplex_iso_check(K, s, frozenset())
        for v in s:
            assert link_simplex_iso_check(K, s, {v})


def test_full_subcomplex_examples(t_c5):
    K = t_c5.complex
    assert same_complex(full_subcomplex(K, K.vertices), K)
    assert full_subcomplex(K, []).is_empty()
    top = next(f for f in K.facets() if len(f) == 4)
    F = full_subcomplex(K, [v for v in K.vertices if v not in top])
    assert F.n == 6
    assert complex_homology(F, "Q").betti.get(1, 0) == 0


def test_sphere_examples(t_c5):
    S = combinatorial_sphere(flag_c5(), ["x1"])
    assert set(S.vertices) == {"x2", "x5"} and S.f_vector() == [2]
    S = combinatorial_sphere(triangle(), ["a"])
    assert set(S.vertices) == {"b", "c"} and S.f_vector() == [2, 1]
    # a top simplex over the edge x1x2: its sphere is the two outer fibers
    K = t_c5.complex
    top = frozenset(["x1|x3", "x1|x4", "x2|x4", "x2|x5"])
    S = combinatorial_sphere(K, top)
    assert S.n == 4
    assert {y.split("|")[0] for y in S.vertices} == {"x3", "x5"}


def test_ball_examples(t_c5):
    B = combinatorial_ball(flag_c5(), ["x1"])
    assert set(B.vertices) == {"x5", "x1", "x2"} and B.f_vector() == [3, 2]
    K = t_c5.complex
    top = next(f for f in K.facets() if len(f) == 4)
    # maximal simplex: the ball is the union of the closed stars of its vertices
    ball = combinatorial_ball(K, top)
    meeting = [m for m in K.simplex_masks() if m & K.mask(top)]
    closure = {K.labels(f) for m in meeting for f in K.simplex_masks() if f & m == f}
    assert {ball.labels(m) for m in ball.simplex_masks()} == closure


def test_balls_collapse_in_thickening(t_c5):
    K = t_c5.complex
    for m in K.simplex_masks():
        assert collapse(combinatorial_ball(K, K.labels(m))).contractible


# -- closest faces and the sphere filtration ----------------------------------


def test_closest_face_examples(t_c5):
    pi = closest_face_map(triangle(), ["a", "b"])
    assert pi == {"c": frozenset({"a", "b"})}
    K = t_c5.complex
    top = frozenset(["x1|x3", "x1|x4", "x2|x4", "x2|x5"])
    pi = closest_face_map(K, top)
    fibers = {b: {y for y in top if y.startswith(b + "|")} for b in ("x1", "x2")}
    for v, face in pi.items():
        assert any(f <= face for f in fibers.values())


def test_closest_face_rejects_empty():
    with pytest.raises(PreconditionError):
        closest_face_map(flag_c5(), [])


def test_vertex_filtration_is_single_stage(t_c5):
    K = t_c5.complex
    F = sphere_filtration(K, ["x1|x3"])
    assert len(F.stages) == 1
    assert F.stages[0] == frozenset(link(K, ["x1|x3"]).vertices)


@given(complexes(max_n=7))
def test_filtration_partitions_the_sphere(K):
    K = K.as_flag() if is_flag(K)[0] else K
    for m in K.simplex_masks(include_empty=False):
        F = sphere_filtration(K, K.labels(m))
        seen = set()
        for cls in F.classes.values():
            assert not (cls & seen)
            seen |= cls
        assert seen == set(F.sphere.vertices)
        assert all(a <= b for a, b in zip(F.stages, F.stages[1:]))


# -- dominated core --------------------------------------------------------------


@given(complexes(max_n=7))
def test_dominated_core_keeps_homology(K):
    core = dominated_core(K)
    assert core.n <= K.n
    assert same_homology(complex_homology(K, "Z", reduced=True), complex_homology(core, "Z", reduced=True))


def test_cliques_are_simplices_of_flag_complex():
    K = flag_c5()
    assert K.f_vector() == [5, 5]
    for m in K.simplex_masks():
        assert all(K.adjacency[a] & m == m & ~(1 << a) for a in iter_bits(m))
