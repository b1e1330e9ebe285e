from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibercox.complexes import Graph, SimplicialComplex, cycle_graph, is_flag
from fibercox.cubical import check_no_disconnecting_cubes, check_no_isolated_corners, vertex_link
from fibercox.davis import (
    check_one_ended,
    is_hyperbolic_racg,
    level2_quotient,
    links_match_defining_complex,
    quotient_f_vector,
    racg_from_complex,
    racg_from_graph,
    racg_normal_form,
    two_neighborhood_embedding_check,
    verify_quotient_properties,
)
from fibercox.errors import PreconditionError
from fibercox.homology import complex_homology

from .conftest import graphs

EDGE = Graph(["a", "b"], [("a", "b")])
VERTEX = Graph(["a"], [])


def tits(G, word):
    """Faithful integer representation: s fixes e_t when s, t commute and sends
    e_t to e_t + 2 e_s otherwise."""
    n = len(G.vertices)
    M = np.eye(n, dtype=np.int64)
    for x in word:
        s = G.index[x]
        R = np.eye(n, dtype=np.int64)
        for t in range(n):
            if t == s:
                R[s, s] = -1
            elif not G.adj[s] >> t & 1:
                R[s, t] = 2
        M = M @ R
    return M


def test_racg_examples(t_c5):
    G = racg_from_graph(Graph(["a", "b"], []))
    assert G.rank == 2 and G.clique_counts() == [1, 2]
    G = racg_from_complex(t_c5.complex)
    assert G.rank == 10 and G.clique_counts()[2] == 25
    G = racg_from_complex(SimplicialComplex.simplex(["a", "b", "c"]))
    assert G.clique_counts() == [1, 3, 3, 1] and G.abelianization_order() == 8


def test_racg_needs_flag_complex():
    hollow = SimplicialComplex.explicit(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]])
    assert not is_flag(hollow)[0]
    with pytest.raises(PreconditionError):
        racg_from_complex(hollow)


def test_hyperbolicity(t_c5):
    ok, w = is_hyperbolic_racg(cycle_graph(4))
    assert not ok and len(w) == 4
    assert is_hyperbolic_racg(cycle_graph(5))[0]
    assert is_hyperbolic_racg(t_c5.complex.graph())[0]


# -- normal forms ------------------------------------------------------------------


def test_normal_form_examples():
    G = racg_from_graph(EDGE)
    assert racg_normal_form(G, "aa") == ()
    assert racg_normal_form(G, "ba") == ("a", "b")
    H = racg_from_graph(Graph(["a", "b"], []))
    assert racg_normal_form(H, "aba") == ("a", "b", "a")
    with pytest.raises(PreconditionError):
        racg_normal_form(H, "abz")


@st.composite
def graph_and_words(draw):
    G = draw(graphs(min_n=2, max_n=5))
    letters = st.sampled_from(G.vertices)
    w1 = draw(st.lists(letters, max_size=8))
    w2 = draw(st.lists(letters, max_size=8))
    return G, w1, w2


@given(graph_and_words())
def test_normal_form_decides_equality(data):
    Gr, w1, w2 = data
    G = racg_from_graph(Gr)
    same_nf = racg_normal_form(G, w1) == racg_normal_form(G, w2)
    same_matrix = np.array_equal(tits(Gr, w1), tits(Gr, w2))
    assert same_nf == same_matrix


@given(graph_and_words())
def test_normal_form_is_idempotent_and_minimal(data):
    Gr, w, _ = data
    G = racg_from_graph(Gr)
    nf = racg_normal_form(G, w)
    assert racg_normal_form(G, list(nf)) == nf
    assert len(nf) <= len(w)
    assert len(nf) % 2 == len(w) % 2
    assert np.array_equal(tits(Gr, nf), tits(Gr, w))


# -- the level-2 quotient ---------------------------------------------------------------


def test_small_quotients():
    assert level2_quotient(racg_from_graph(VERTEX)).complex.f_vector() == [2, 1]
    assert level2_quotient(racg_from_graph(EDGE)).complex.f_vector() == [4, 4, 1]
    assert quotient_f_vector(racg_from_graph(EDGE)) == [4, 4, 1]


def test_c5_quotient(q5):
    X = q5.complex
    assert X.f_vector() == [32, 80, 40]
    H = complex_homology(X, "Z")
    assert [H.betti[d] for d in range(3)] == [1, 10, 1]
    assert check_no_isolated_corners(X)[0]
    assert check_no_disconnecting_cubes(X)[0]
    assert links_match_defining_complex(q5)[0]
    for v in X.vertices:
        assert vertex_link(X, v).f_vector() == [5, 5]


def test_g2_counting_formula(t_c5):
    assert quotient_f_vector(racg_from_complex(t_c5.complex)) == [1024, 5120, 6400, 2560, 320]


@given(graphs(min_n=1, max_n=6))
def test_quotient_matches_counting_formula(Gr):
    G = racg_from_graph(Gr)
    Q = level2_quotient(G)
    assert Q.complex.f_vector() == quotient_f_vector(G)
    assert links_match_defining_complex(Q, vertices=Q.complex.vertices[:3])[0]


def test_embedding_checks():
    assert two_neighborhood_embedding_check(racg_from_graph(EDGE)).injective
    assert two_neighborhood_embedding_check(racg_from_graph(VERTEX)).injective
    rep = two_neighborhood_embedding_check(racg_from_graph(cycle_graph(5)))
    # x1 x3 and x3 x1 are distinct elements with the same image mod 2
    assert not rep.injective
    a, b = rep.witness
    assert a != b and sorted(a) == sorted(b)


def test_one_endedness(t_c5):
    path = SimplicialComplex.from_graph(Graph(["a", "b", "c"], [("a", "b"), ("b", "c")]))
    assert check_one_ended(path) == (False, ("b",))
    assert check_one_ended(SimplicialComplex.from_graph(cycle_graph(5)))[0]
    assert check_one_ended(t_c5.complex)[0]


def test_quotient_property_reports(q5):
    rep = verify_quotient_properties(q5, expected_cd=2)
    assert rep.passed and rep.checks["cd"] == 2
    assert not rep.inductive_input
    sq = level2_quotient(racg_from_graph(EDGE))
    rep = verify_quotient_properties(sq)
    assert "isolated_corners" in rep.failures and not rep.inductive_input
