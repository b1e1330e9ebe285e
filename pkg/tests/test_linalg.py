from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from fibercox.linalg import GF2Basis, gf2_kernel, gf2_vectors, rank_gf2, rank_q, rank_z, smith_invariants


@st.composite
def int_matrices(draw, max_rows=6, max_cols=6, lo=-3, hi=3):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = [[draw(st.integers(lo, hi)) for _ in range(c)] for _ in range(r)]
    return rows


def columns(rows):
    return [{i: rows[i][j] for i in range(len(rows)) if rows[i][j]} for j in range(len(rows[0]))]


@given(int_matrices())
def test_invariants_match_sympy(rows):
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    expected = sorted(abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0)
    assert smith_invariants(columns(rows)) == expected


@given(int_matrices())
def test_invariants_divide(rows):
    inv = smith_invariants(columns(rows))
    for a, b in zip(inv, inv[1:]):
        assert b % a == 0


@given(int_matrices())
def test_ranks_agree_with_sympy(rows):
    cols = columns(rows)
    r = Matrix(rows).rank()
    assert rank_z(cols) == r
    assert rank_q(cols) == r


@given(int_matrices(lo=0, hi=1))
def test_gf2_rank_matches_mod2_elimination(rows):
    cols = columns(rows)
    # independent xor elimination by minimum reduction
    vecs = [sum((rows[i][j] % 2) << i for i in range(len(rows))) for j in range(len(rows[0]))]
    basis = []
    for v in vecs:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    assert rank_gf2(cols) == len(basis)


def test_gf2_basis_membership():
    B = GF2Basis([0b011, 0b110])
    assert len(B) == 2
    assert B.contains(0b101)
    assert not B.contains(0b001)


@given(st.lists(st.integers(0, 255), max_size=10))
def test_gf2_kernel_combinations_vanish(vecs):
    ker = gf2_kernel(vecs)
    basis = GF2Basis(vecs)
    assert len(ker) == len(vecs) - len(basis)
    for comb in ker:
        acc = 0
        for i, v in enumerate(vecs):
            if comb >> i & 1:
                acc ^= v
        assert comb and acc == 0


def test_gf2_vectors_reduce_mod_two():
    assert gf2_vectors([{0: 2, 1: 3}, {2: -1}]) == [0b010, 0b100]
