from __future__ import annotations

from fibercox.complexes import Graph, SimplicialComplex, cycle_graph
from fibercox.cubical import cycle_complex
from fibercox.lemmas import check_cube_links, check_minimal_cubes, run_lemma_suite
from fibercox.thickening import build_th1



def octahedron():
    pairs = [("a", "A"), ("b", "B"), ("c", "C")]
    verts = [v for p in pairs for v in p]
    edges = [(u, v) for u in verts for v in verts if u < v and (u, v) not in pairs and (v, u) not in pairs]
    return SimplicialComplex.from_graph(Graph(verts, edges))


def test_suite_on_thickening(t_c5, q5):
    rep = run_lemma_suite(t_c5, 1, extra_cube_complexes=[q5.complex])
    assert rep.passed and rep.counterexamples() == 0
    r = rep.results
    assert r["link_of_link"].checked == 360
    assert r["gluing_cd_bound"].checked == 240
    assert r["link_join"].checked == 60


def test_suite_on_flag_cycles():
    for k in (5, 6):
        rep = run_lemma_suite(build_th1(cycle_complex(k)), 1)
        assert rep.passed
        bare = run_lemma_suite(SimplicialComplex.from_graph(cycle_graph(k)), 1)
        assert bare.passed
        assert bare.results["link_join"].skipped


def test_suite_finds_counterexamples_off_hypotheses():
    # the octahedron is flag but not 5-large: vertex spheres are squares
    rep = run_lemma_suite(octahedron(), 1)
    assert not rep.passed
    assert not rep.results["sphere_cd_bound"].passed


def test_cube_link_check_counts(q5):
    r = check_cube_links(q5.complex)
    # (vertex, vertex) + (edge, endpoint) + (square, corner)
    assert r.checked == 32 + 2 * 80 + 4 * 40 and r.passed


def test_minimal_cube_oracle(t_c6):
    K = t_c6.complex
    r = check_minimal_cubes(t_c6, [K.labels(m) for m in K.simplex_masks()])
    assert r.passed and r.checked > 0


def test_report_json_shape(t_c5):
    data = run_lemma_suite(t_c5, 1).to_json()
    assert data["passed"] and data["level"] == 1
    assert set(data["checks"]) >= {"ball_collapsible", "sphere_cd_bound", "gluing_cd_bound"}
