from __future__ import annotations

from hypothesis import given

from fibercox.collapse import collapse
from fibercox.complexes import SimplicialComplex
from fibercox.cubical import single_cube
from fibercox.homology import complex_homology

from .conftest import complexes


def test_simplex_collapses():
    for n in range(1, 6):
        rep = collapse(SimplicialComplex.simplex([f"v{i}" for i in range(n)]))
        assert rep.contractible


def test_hollow_triangle_is_inconclusive():
    hollow = SimplicialComplex.explicit(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]])
    rep = collapse(hollow)
    assert rep.collapsible == "inconclusive"
    assert rep.residual


def test_cube_collapses():
    assert collapse(single_cube(3)).contractible


def test_seeded_runs_are_reproducible():
    K = SimplicialComplex.explicit(list("abcdef"), [["a", "b", "c"], ["c", "d"], ["d", "e", "f"]])
    a, b = collapse(K, seed=7), collapse(K, seed=7)
    assert a.log == b.log


@given(complexes(max_n=7))
def test_collapse_implies_trivial_homology(K):
    if collapse(K, restarts=4).contractible:
        assert complex_homology(K, "Z", reduced=True).is_trivial()
