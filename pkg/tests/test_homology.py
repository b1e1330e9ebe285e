from __future__ import annotations

import random

import pytest
from hypothesis import given

from fibercox.complexes import SimplicialComplex, combinatorial_ball, combinatorial_sphere, cycle_graph, full_subcomplex
from fibercox.cubical import cycle_complex, graph_complex, single_cube
from fibercox.complexes import Graph
from fibercox.errors import PreconditionError
from fibercox.homology import (
    chain_complex,
    cohomological_dimension,
    complex_homology,
    filtration_gluings,
    link_cd_check,
    mayer_vietoris_check,
    sphere_cd_check,
    vcd_racg,
)
from fibercox.thickening import build_pair_thickening

from .conftest import complexes

RP2 = [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2],
       [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]]


def rp2():
    return SimplicialComplex.explicit([str(i) for i in range(1, 7)], [[str(v) for v in f] for f in RP2])


def test_single_edge_boundary():
    C = chain_complex(single_cube(1))
    M = C.matrix(1)
    assert len(M) == 2 and len(M[0]) == 1
    assert sorted(r[0] for r in M) == [-1, 1]


def test_boundary_squares_to_zero():
    assert chain_complex(cycle_complex(4, minimum=4)).check_dd()
    assert chain_complex(single_cube(3)).check_dd()


def test_thickening_cell_counts(t_c5):
    assert chain_complex(t_c5.complex).cell_counts() == [10, 25, 20, 5]


def test_point_reduced_is_zero():
    H = complex_homology(SimplicialComplex.simplex(["p"]), "Z", reduced=True)
    assert H.is_trivial()


def test_empty_complex_reduced():
    H = complex_homology(SimplicialComplex.empty(), "Z", reduced=True)
    assert H.nonzero_degrees() == [-1]


def test_circle_like_examples(t_c5, q5):
    H = complex_homology(t_c5.complex, "Z", reduced=True)
    assert H.nonzero_degrees() == [1] and H.betti[1] == 1
    H = complex_homology(q5.complex, "Z")
    assert [H.betti[d] for d in range(3)] == [1, 10, 1]
    assert all(not H.torsion.get(d) for d in range(3))
    assert H.euler_characteristic() == -8


def test_projective_plane():
    K = rp2()
    H = complex_homology(K, "Z")
    assert H.groups() == {0: "Z", 1: "Z/2", 2: "0"}
    Hc = complex_homology(K, "Z", cohomology=True)
    assert Hc.groups() == {0: "Z", 1: "0", 2: "Z/2"}
    assert [complex_homology(K, "GF2").betti[d] for d in range(3)] == [1, 1, 1]
    assert [complex_homology(K, "Q").betti[d] for d in range(3)] == [1, 0, 0]
    # cd over Z sees the torsion in degree 2, over Q it does not
    assert cohomological_dimension(K, "Z") == 2
    assert cohomological_dimension(K, "Q") == 0


def test_cd_examples(t_c5, q5):
    assert cohomological_dimension(SimplicialComplex.simplex(["p"])) == 0
    assert cohomological_dimension(t_c5.complex) == 1
    assert cohomological_dimension(q5.complex) == 2
    with pytest.raises(PreconditionError):
        cohomological_dimension(SimplicialComplex.empty())


def _uct_gf2(H, d):
    odd = lambda ts: sum(1 for t in ts if t % 2 == 0)  # noqa: E731
    return H.betti.get(d, 0) + odd(H.torsion.get(d, [])) + odd(H.torsion.get(d - 1, []))


@given(complexes(max_n=8))
def test_coefficient_consistency(K):
    Hz = complex_homology(K, "Z")
    Hq = complex_homology(K, "Q")
    H2 = complex_homology(K, "GF2")
    Hc = complex_homology(K, "Z", cohomology=True)
    for d in Hz.degrees():
        assert Hq.betti.get(d, 0) == Hz.betti.get(d, 0)
        assert H2.betti.get(d, 0) == _uct_gf2(Hz, d)
        assert Hc.betti.get(d, 0) == Hz.betti.get(d, 0)
        assert sorted(Hc.torsion.get(d, [])) == sorted(Hz.torsion.get(d - 1, []))
    assert Hz.euler_characteristic() == chain_complex(K).euler_characteristic()


# -- vcd -----------------------------------------------------------------------


def test_vcd_examples(t_c5):
    r = vcd_racg(SimplicialComplex.simplex(["a", "b", "c"]))
    assert r.value == 0 and set(r.witness) == {"a", "b", "c"}
    r = vcd_racg(SimplicialComplex.from_graph(cycle_graph(5)))
    assert r.value == 2 and tuple(r.witness) == ()
    r = vcd_racg(t_c5.complex)
    assert r.value == 2 and tuple(r.witness) == () and len(r.table) == 61


def test_vcd_free_product():
    # two points: infinite dihedral group, vcd 1
    r = vcd_racg(SimplicialComplex.from_graph(Graph(["a", "b"], [])))
    assert r.value == 1


# -- cd bounds ---------------------------------------------------------------------


def test_sphere_and_link_bounds_on_thickening(t_c5):
    K = t_c5.complex
    for m in K.simplex_masks():
        s = K.labels(m)
        r = sphere_cd_check(K, s, 1)
        assert r.holds and r.cd == 0
        assert link_cd_check(K, s, 1).holds


def test_sphere_bound_on_flag_cycle():
    K = SimplicialComplex.from_graph(cycle_graph(5))
    r = sphere_cd_check(K, ["x1", "x2"], 1)
    assert r.holds and r.cd == 0


def test_link_of_full_fiber(t_c5):
    K = t_c5.complex
    fiber = [y for y in K.vertices if y.startswith("x1|")]
    r = link_cd_check(K, fiber, 1)
    assert r.holds and r.cd == 0


def test_link_check_rejects_empty(t_c5):
    with pytest.raises(PreconditionError):
        link_cd_check(t_c5.complex, [], 1)


def test_sampled_sphere_bound_one_level_up(q5):
    # the thickening of the C5 quotient is far too large to enumerate; the dominated
    # core fallback keeps each check small
    T, _ = build_pair_thickening(q5.complex)
    K = T.complex
    rng = random.Random(1)
    tops = [c for c in q5.complex.cube_ids() if q5.complex.cube_dim(c) == 2]
    for _ in range(4):
        cube = q5.complex.labels(q5.complex.cube_mask(rng.choice(tops)))
        over = [y for y in K.vertices if T.alpha(y) in cube]
        sigma = rng.sample(over, rng.randint(1, 12))
        assert sphere_cd_check(K, sigma, 2, budget=20_000).holds


# -- Mayer-Vietoris and gluing -------------------------------------------------------


def test_circle_from_two_arcs():
    Z = SimplicialComplex.from_graph(cycle_graph(6))
    A = full_subcomplex(Z, ["x1", "x2", "x3", "x4"])
    B = full_subcomplex(Z, ["x4", "x5", "x6", "x1"])
    C = full_subcomplex(Z, ["x1", "x4"])
    rep = mayer_vietoris_check(A, B, C, Z)
    assert rep.exact


def test_mayer_vietoris_on_thickening(t_c5):
    K = t_c5.complex
    for m in K.simplex_masks()[::7]:
        s = K.labels(m)
        A = full_subcomplex(K, [v for v in K.vertices if v not in s])
        B = combinatorial_ball(K, s)
        C = combinatorial_sphere(K, s)
        assert mayer_vietoris_check(A, B, C, K).exact


def test_mayer_vietoris_rejects_bad_cover():
    Z = SimplicialComplex.from_graph(cycle_graph(5))
    A = full_subcomplex(Z, ["x1", "x2"])
    with pytest.raises(PreconditionError):
        mayer_vietoris_check(A, A, A, Z)


def test_gluing_bounds(t_c5):
    K = t_c5.complex
    count = 0
    for m in K.simplex_masks():
        for rep in filtration_gluings(K, K.labels(m), 1):
            count += 1
            assert rep.holds
    assert count == 240


def test_graph_cycle_homology():
    H = complex_homology(graph_complex(cycle_graph(7)), "Z")
    assert H.betti[0] == 1 and H.betti[1] == 1
