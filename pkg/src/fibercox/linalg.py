"""Exact sparse linear algebra for boundary matrices.

Matrices are lists of columns; each column is a ``{row: int}`` dict.  Three
independent engines: integer Smith normal form (invariant factors), rank over
the rationals (exact fractions), and rank over GF(2) (int bitsets).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Column = dict


def _to_rows(cols: Sequence[Column]):
    rows: dict[int, dict[int, int]] = {}
    colsets: dict[int, set[int]] = {}
    for c, col in enumerate(cols):
        nz = {r: v for r, v in col.items() if v}
        if not nz:
            continue
        colsets[c] = set(nz)
        for r, v in nz.items():
            rows.setdefault(r, {})[c] = v
    return rows, colsets


def _eliminate(rows, colsets, r, c, inverse):
    """Clear column c using pivot row r.  ``inverse`` is the pivot's inverse."""
    prow = rows.pop(r)
    for col in prow:
        colsets[col].discard(r)
    for r2 in list(colsets[c]):
        row2 = rows[r2]
        factor = row2[c] * inverse
        for col, v in prow.items():
            nv = row2.get(col, 0) - factor * v
            if nv:
                if col not in row2:
                    colsets[col].add(r2)
                row2[col] = nv
            else:
                if col in row2:
                    del row2[col]
                    colsets[col].discard(r2)
    del colsets[c]
    for col in prow:
        if col in colsets and not colsets[col]:
            del colsets[col]


def _unit_phase(rows, colsets) -> int:
    """Eliminate with +-1 pivots (Markowitz order) until none remain; returns count."""
    found = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(colsets, key=lambda k: len(colsets[k])):
            rs = colsets.get(c)
            if not rs:
                continue
            best = None
            for r in rs:
                v = rows[r][c]
                if v == 1 or v == -1:
                    cost = len(rows[r])
                    if best is None or cost < best[0]:
                        best = (cost, r)
            if best is None:
                continue
            r = best[1]
            _eliminate(rows, colsets, r, c, rows[r][c])
            found += 1
            progress = True
    return found


def _dense_snf_diagonal(mat: list[list[int]]) -> list[int]:
    """Invariant factors (nonzero, divisibility chain) of a dense integer matrix."""
    a = [row[:] for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ai, at = a[i], a[t]
                        for j in range(t, n):
                            ai[j] -= q * at[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for i in range(t, m):
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                # divisibility of the trailing block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                at, ab = a[t], a[bad]
                for j in range(t, n):
                    at[j] += ab[j]
                continue
            # move the smallest remaining entry of row/col t to the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(cand)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def smith_invariants(cols: Sequence[Column]) -> list[int]:
    """Nonzero invariant factors of an integer matrix, ascending (1s included)."""
    rows, colsets = _to_rows(cols)
    units = _unit_phase(rows, colsets)
    live_rows = sorted(r for r, row in rows.items() if row)
    live_cols = sorted(colsets)
    rest = []
    if live_rows and live_cols:
        cidx = {c: j for j, c in enumerate(live_cols)}
        dense = []
        for r in live_rows:
            row = [0] * len(live_cols)
            for c, v in rows[r].items():
                row[cidx[c]] = v
            dense.append(row)
        rest = _dense_snf_diagonal(dense)
    return sorted([1] * units + rest)


def rank_z(cols: Sequence[Column]) -> int:
    return len(smith_invariants(cols))


def rank_q(cols: Sequence[Column]) -> int:
    """Rank over the rationals by exact fraction elimination."""
    rows, colsets = _to_rows(cols)
    rank = 0
    while colsets:
        c = min(colsets, key=lambda k: len(colsets[k]))
        r = min(colsets[c], key=lambda k: len(rows[k]))
        piv = rows[r][c]
        if not isinstance(piv, Fraction):
            row = rows[r]
            for k in row:
                row[k] = Fraction(row[k])
        _eliminate(rows, colsets, r, c, 1 / Fraction(piv))
        rank += 1
    return rank


def gf2_vectors(cols: Sequence[Column]) -> list[int]:
    out = []
    for col in cols:
        v = 0
        for r, x in col.items():
            if x % 2:
                v ^= 1 << r
        out.append(v)
    return out


class GF2Basis:
    """Incremental xor basis keyed by leading bit."""

    def __init__(self, vectors=()):
        self.pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            p = self.pivots.get(top)
            if p is None:
                return v
            v ^= p
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v:
            self.pivots[v.bit_length() - 1] = v
            return True
        return False

    def __len__(self):
        return len(self.pivots)

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0


def rank_gf2_bits(vectors: Sequence[int]) -> int:
    return len(GF2Basis(vectors))


def rank_gf2(cols: Sequence[Column]) -> int:
    return rank_gf2_bits(gf2_vectors(cols))


def gf2_kernel(vectors: Sequence[int]) -> list[int]:
    """Basis of combinations (bitmask over input positions) summing to zero."""
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for i, v in enumerate(vectors):
        comb = 1 << i
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = (v, comb)
                break
            pv, pc = pivots[top]
            v ^= pv
            comb ^= pc
        if not v:
            kernel.append(comb)
    return kernel
