"""Chain complexes, exact (co)homology over Z, Q and GF(2), cohomological
dimension, the complement formula for RACG vcd, and Mayer-Vietoris bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bitset import bit_list, popcount
from .collapse import collapse
from .complexes import (
    DEFAULT_CELL_BUDGET,
    SimplicialComplex,
    combinatorial_ball,
    combinatorial_sphere,
    dominated_core,
    full_subcomplex,
    link,
    sphere_filtration,
)
from .cubical import CubeComplex
from .errors import BudgetExceeded, PreconditionError
from .linalg import GF2Basis, gf2_kernel, rank_gf2, rank_q, smith_invariants

COEFFS = ("Z", "Q", "GF2")


def _norm_coeffs(coeffs: str) -> str:
    c = coeffs.upper()
    if c in ("Z", "Q", "GF2"):
        return c
    if c in ("F2", "Z2", "Z/2"):
        return "GF2"
    raise PreconditionError(f"unknown coefficients {coeffs!r}; use z, q or gf2")


@dataclass(frozen=True)
class ChainComplex:
    """``bases[d]`` lists the d-cells; ``boundaries[d]`` has one column per d-cell,
    each a ``{row index in degree d-1: coefficient}`` dict (``boundaries[0]`` is empty)."""

    bases: tuple
    boundaries: tuple

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    def cell_counts(self) -> list[int]:
        return [len(b) for b in self.bases]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(b) for d, b in enumerate(self.bases))

    def matrix(self, d: int) -> list[list[int]]:
        """Dense ``len(bases[d-1]) x len(bases[d])`` boundary matrix."""
        rows = len(self.bases[d - 1]) if d >= 1 else 0
        out = [[0] * len(self.bases[d]) for _ in range(rows)]
        if d >= 1:
            for j, col in enumerate(self.boundaries[d]):
                for i, v in col.items():
                    out[i][j] = v
        return out

    def check_dd(self) -> bool:
        for d in range(2, len(self.bases)):
            prev = self.boundaries[d - 1]
            for col in self.boundaries[d]:
                acc: dict[int, int] = {}
                for i, v in col.items():
                    for k, w in prev[i].items():
                        acc[k] = acc.get(k, 0) + v * w
                if any(acc.values()):
                    return False
        return True


def _simplicial_chain(K: SimplicialComplex, budget: int | None) -> ChainComplex:
    masks = K.simplex_masks(budget)
    by_dim: list[list[int]] = []
    for m in masks:
        d = popcount(m) - 1
        while len(by_dim) <= d:
            by_dim.append([])
        by_dim[d].append(m)
    where = [{m: i for i, m in enumerate(ms)} for ms in by_dim]
    boundaries = [tuple({} for _ in by_dim[0])] if by_dim else []
    for d in range(1, len(by_dim)):
        cols = []
        prev = where[d - 1]
        for m in by_dim[d]:
            col = {}
            for i, v in enumerate(bit_list(m)):
                col[prev[m & ~(1 << v)]] = -1 if i % 2 else 1
            cols.append(col)
        boundaries.append(tuple(cols))
    bases = tuple(tuple(K.ordered(m) for m in ms) for ms in by_dim)
    return ChainComplex(bases, tuple(boundaries))


def _cubical_chain(X: CubeComplex, budget: int | None) -> ChainComplex:
    if budget is not None and X.cube_count() > budget:
        raise BudgetExceeded(f"{X.cube_count()} cubes exceed the cell budget")
    by_dim: list[list[int]] = []
    for cid in X.cube_ids():
        d = X.cube_dim(cid)
        while len(by_dim) <= d:
            by_dim.append([])
        by_dim[d].append(cid)
    where = [{c: i for i, c in enumerate(cs)} for cs in by_dim]
    boundaries = [tuple({} for _ in by_dim[0])] if by_dim else []
    for d in range(1, len(by_dim)):
        cols = []
        prev = where[d - 1]
        for cid in by_dim[d]:
            col: dict[int, int] = {}
            for fid, sign in X.boundary_coefficients(cid):
                r = prev[fid]
                col[r] = col.get(r, 0) + sign
            cols.append({r: v for r, v in col.items() if v})
        boundaries.append(tuple(cols))
    bases = tuple(tuple(tuple(X.vertices[v] for v in X.cube_array(c)) for c in cs) for cs in by_dim)
    return ChainComplex(bases, tuple(boundaries))


def chain_complex(K, budget: int | None = DEFAULT_CELL_BUDGET) -> ChainComplex:
    if isinstance(K, SimplicialComplex):
        return _simplicial_chain(K, budget)
    if isinstance(K, CubeComplex):
        return _cubical_chain(K, budget)
    raise PreconditionError(f"cannot build a chain complex from {type(K).__name__}")


@dataclass
class HomologyResult:
    """Per-degree ranks and (integral) torsion; degree -1 appears in reduced mode."""

    coeffs: str
    reduced: bool
    cohomology: bool
    betti: dict
    torsion: dict
    cells: dict
    note: str | None = None

    def degrees(self) -> list[int]:
        return sorted(self.betti)

    def is_zero(self, d: int) -> bool:
        return not self.betti.get(d, 0) and not self.torsion.get(d)

    def nonzero_degrees(self) -> list[int]:
        return [d for d in self.degrees() if not self.is_zero(d)]

    def top_degree(self) -> int | None:
        nz = self.nonzero_degrees()
        return max(nz) if nz else None

    def is_trivial(self) -> bool:
        return not self.nonzero_degrees()

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * b for d, b in self.betti.items() if d >= 0)

    def groups(self) -> dict:
        """Human-readable groups, e.g. ``{0: "Z", 1: "Z^10", 2: "Z/2"}``."""
        ring = {"Z": "Z", "Q": "Q", "GF2": "F2"}[self.coeffs]
        out = {}
        for d in self.degrees():
            parts = []
            b = self.betti[d]
            if b:
                parts.append(ring if b == 1 else f"{ring}^{b}")
            parts += [f"Z/{t}" for t in self.torsion.get(d, [])]
            out[d] = " + ".join(parts) if parts else "0"
        return out

    def to_json(self) -> dict:
        return {
            "coeffs": self.coeffs,
            "reduced": self.reduced,
            "cohomology": self.cohomology,
            "betti": {str(d): self.betti[d] for d in self.degrees()},
            "torsion": {str(d): list(self.torsion.get(d, [])) for d in self.degrees()},
            "groups": {str(d): g for d, g in self.groups().items()},
            "note": self.note,
        }


def homology(C: ChainComplex, coeffs: str = "Z", reduced: bool = False,
             cohomology: bool = False) -> HomologyResult:
    """(Co)homology of a chain complex.  Over Z the torsion comes from Smith normal
    form; cohomology over Z follows from universal coefficients."""
    coeffs = _norm_coeffs(coeffs)
    counts = {d: len(b) for d, b in enumerate(C.bases)}
    lo = 0
    if reduced:
        lo = -1
        counts[-1] = 1
    hi = C.top
    ranks: dict[int, int] = {}
    invariants: dict[int, list[int]] = {}
    for d in range(1, hi + 1):
        cols = C.boundaries[d]
        if coeffs == "Z":
            inv = smith_invariants(cols)
            invariants[d] = [x for x in inv if x > 1]
            ranks[d] = len(inv)
        elif coeffs == "Q":
            ranks[d] = rank_q(cols)
        else:
            ranks[d] = rank_gf2(cols)
    if reduced:
        ranks[0] = 1 if counts.get(0, 0) else 0
    betti = {}
    torsion = {}
    for d in range(lo, hi + 1):
        betti[d] = counts[d] - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if coeffs == "Z":
            # H_d torsion = invariants of d_{d+1}; H^d torsion = invariants of d_d
            src = d if cohomology else d + 1
            torsion[d] = list(invariants.get(src, []))
        else:
            torsion[d] = []
    return HomologyResult(coeffs, reduced, cohomology, betti, torsion, counts)


def complex_homology(K, coeffs: str = "Z", reduced: bool = False, cohomology: bool = False,
                     budget: int | None = DEFAULT_CELL_BUDGET) -> HomologyResult:
    """Homology of a simplicial or cube complex.  A simplicial complex over budget is
    first shrunk to its dominated-vertex core (same homotopy type)."""
    if isinstance(K, SimplicialComplex) and K.is_empty():
        C = ChainComplex((), ())
        return homology(C, coeffs, reduced, cohomology)
    try:
        C = chain_complex(K, budget)
        note = None
    except BudgetExceeded:
        if not isinstance(K, SimplicialComplex):
            raise
        core = dominated_core(K)
        C = chain_complex(core, budget)
        note = f"computed on the dominated-vertex core ({core.n} of {K.n} vertices)"
    res = homology(C, coeffs, reduced, cohomology)
    res.note = note
    return res


def cohomological_dimension(K, coeffs: str = "Z", budget: int | None = DEFAULT_CELL_BUDGET) -> int:
    """Largest k with nonzero unreduced H^k.  Empty input is rejected."""
    if (isinstance(K, SimplicialComplex) and K.is_empty()) or (isinstance(K, CubeComplex) and K.n == 0):
        raise PreconditionError("cohomological dimension of the empty complex is not defined")
    res = complex_homology(K, coeffs, reduced=False, cohomology=True, budget=budget)
    top = res.top_degree()
    return 0 if top is None else top


def _cd_or_minus_one(K, coeffs: str = "Z", budget: int | None = DEFAULT_CELL_BUDGET) -> int:
    if isinstance(K, SimplicialComplex) and K.is_empty():
        return -1
    return cohomological_dimension(K, coeffs, budget)


# ----------------------------------------------------------------------------
# RACG vcd by complements of simplices


@dataclass
class VcdResult:
    value: int
    witness: tuple
    table: list
    coeffs: str = "Z"

    def to_json(self) -> dict:
        return {
            "vcd": self.value,
            "witness": list(self.witness),
            "coeffs": self.coeffs,
            "simplices": len(self.table),
            "table": [{"sigma": list(s), "n": n} for s, n in self.table],
        }


def vcd_racg(L: SimplicialComplex, coeffs: str = "Z", budget: int | None = DEFAULT_CELL_BUDGET) -> VcdResult:
    """max over simplices s (the empty one included) of n with reduced
    H^{n-1}(L minus s) nonzero; L minus s is the full subcomplex off s."""
    coeffs = _norm_coeffs(coeffs)
    masks = L.simplex_masks(budget, include_empty=True)
    memo: dict[int, int | None] = {}
    table = []
    best = None
    for s in masks:
        keep = L.full_mask & ~s
        if keep not in memo:
            res = complex_homology(L.restrict(keep), coeffs, reduced=True, cohomology=True, budget=budget)
            top = res.top_degree()
            memo[keep] = None if top is None else top + 1
        n = memo[keep]
        sigma = L.ordered(s)
        table.append((sigma, n))
        if n is not None and (best is None or n > best[0]):
            best = (n, sigma)
    if best is None:
        raise PreconditionError("no simplex complement has nonzero reduced cohomology")
    return VcdResult(best[0], best[1], table, coeffs)


# ----------------------------------------------------------------------------
# cd bounds on spheres and links


@dataclass
class CdCheck:
    holds: bool
    cd: int
    bound: int
    what: str

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {"holds": self.holds, "cd": self.cd, "bound": self.bound, "of": self.what}


def sphere_cd_check(T: SimplicialComplex, sigma, n: int, coeffs: str = "Z",
                    budget: int | None = DEFAULT_CELL_BUDGET) -> CdCheck:
    """cd of the combinatorial sphere of ``sigma`` against ``n - 1`` (-1 when empty)."""
    cd = _cd_or_minus_one(combinatorial_sphere(T, sigma), coeffs, budget)
    return CdCheck(cd <= n - 1, cd, n - 1, "sphere")


def link_cd_check(T: SimplicialComplex, sigma, n: int, coeffs: str = "Z",
                  budget: int | None = DEFAULT_CELL_BUDGET) -> CdCheck:
    if not frozenset(sigma):
        raise PreconditionError("link_cd_check needs a nonempty simplex")
    cd = _cd_or_minus_one(link(T, sigma), coeffs, budget)
    return CdCheck(cd <= n - 1, cd, n - 1, "link")


# ----------------------------------------------------------------------------
# Mayer-Vietoris over GF(2)


def _label_simplices(K: SimplicialComplex, budget) -> set[frozenset]:
    return {K.labels(m) for m in K.simplex_masks(budget)}


class _Gf2Chains:
    """GF(2) chains of subcomplexes of an ambient complex, as ambient bitmasks."""

    def __init__(self, Z: SimplicialComplex, budget):
        self.Z = Z
        masks = Z.simplex_masks(budget)
        self.by_dim: dict[int, list[int]] = {}
        for m in masks:
            self.by_dim.setdefault(popcount(m) - 1, []).append(m)
        self.pos = {d: {m: i for i, m in enumerate(ms)} for d, ms in self.by_dim.items()}
        self.top = max(self.by_dim, default=-1)

    def boundary(self, d: int, m: int) -> int:
        if d == 0:
            return 0
        pos = self.pos[d - 1]
        v = 0
        for i in bit_list(m):
            v ^= 1 << pos[m & ~(1 << i)]
        return v

    def cells(self, d: int, members: set[int]) -> list[int]:
        return [m for m in self.by_dim.get(d, []) if m in members]

    def cycles(self, d: int, members: set[int]) -> list[int]:
        cells = self.cells(d, members)
        kernel = gf2_kernel([self.boundary(d, m) for m in cells])
        pos = self.pos.get(d, {})
        out = []
        for comb in kernel:
            v = 0
            for j in bit_list(comb):
                v |= 1 << pos[cells[j]]
            out.append(v)
        return out

    def boundaries(self, d: int, members: set[int]) -> list[int]:
        return [self.boundary(d + 1, m) for m in self.cells(d + 1, members)]

    def support(self, d: int, members: set[int]) -> int:
        pos = self.pos.get(d, {})
        v = 0
        for m in self.cells(d, members):
            v |= 1 << pos[m]
        return v


@dataclass
class MayerVietorisReport:
    exact: bool
    degrees: list
    failures: list = field(default_factory=list)

    def dims(self, which: str) -> dict:
        return {row["degree"]: row[which] for row in self.degrees}

    def to_json(self) -> dict:
        return {"exact": self.exact, "degrees": self.degrees, "failures": self.failures}


def _rank_of_image(base: Sequence[int], images: Iterable[int]) -> int:
    b = GF2Basis(base)
    before = len(b)
    for v in images:
        b.add(v)
    return len(b) - before


def mayer_vietoris_check(A: SimplicialComplex, B: SimplicialComplex, C: SimplicialComplex,
                         Z: SimplicialComplex, budget: int | None = DEFAULT_CELL_BUDGET) -> MayerVietorisReport:
    """Exactness of H(C) -> H(A)+H(B) -> H(Z) -> H(C)[-1] over GF(2) by rank
    bookkeeping.  Over a field the cohomology sequence is the dual one, so the same
    ranks certify it."""
    sa, sb, sc, sz = (_label_simplices(K, budget) for K in (A, B, C, Z))
    if sa | sb != sz:
        raise PreconditionError("A and B do not cover Z")
    if sa & sb != sc:
        raise PreconditionError("A and B do not intersect in C")
    ch = _Gf2Chains(Z, budget)
    to_mask = {Z.labels(m): m for ms in ch.by_dim.values() for m in ms}
    ma = {to_mask[s] for s in sa}
    mb = {to_mask[s] for s in sb}
    mc = {to_mask[s] for s in sc}
    mz = set(to_mask.values())

    rows = []
    failures = []
    info = {}
    for d in range(ch.top + 2):
        nz = len(ch.by_dim.get(d, []))
        cyc = {k: ch.cycles(d, s) for k, s in (("A", ma), ("B", mb), ("C", mc), ("Z", mz))}
        bnd = {k: ch.boundaries(d, s) for k, s in (("A", ma), ("B", mb), ("C", mc), ("Z", mz))}
        h = {k: len(GF2Basis(cyc[k])) - len(GF2Basis(bnd[k])) for k in cyc}
        # H(C) -> H(A) + H(B): z -> (z, z) in the concatenated space
        base_ab = list(bnd["A"]) + [v << nz for v in bnd["B"]]
        r_in = _rank_of_image(base_ab, (z | (z << nz) for z in cyc["C"]))
        # H(A) + H(B) -> H(Z)
        r_out = _rank_of_image(bnd["Z"], list(cyc["A"]) + list(cyc["B"]))
        info[d] = (h, r_in, r_out, cyc["Z"])
    for d in range(ch.top + 2):
        h, r_in, r_out, zcyc = info[d]
        # connecting map H_d(Z) -> H_{d-1}(C): split a cycle z = a + b, take the boundary of a
        if d == 0:
            r_conn = 0
        else:
            amask = ch.support(d, ma)
            imgs = []
            for z in zcyc:
                a = z & amask
                pos = ch.by_dim[d]
                v = 0
                for j in bit_list(a):
                    v ^= ch.boundary(d, pos[j])
                imgs.append(v)
            r_conn = _rank_of_image(ch.boundaries(d - 1, mc), imgs)
        info[d] = info[d] + (r_conn,)
    for d in range(ch.top + 2):
        h, r_in, r_out, _, r_conn = info[d]
        r_conn_up = info[d + 1][4] if d + 1 in info else 0
        row = {
            "degree": d,
            "C": h["C"], "A": h["A"], "B": h["B"], "Z": h["Z"],
            "rank_in": r_in, "rank_out": r_out, "rank_connecting": r_conn,
        }
        rows.append(row)
        if h["C"] != r_conn_up + r_in:
            failures.append(("H(C)", d))
        if h["A"] + h["B"] != r_in + r_out:
            failures.append(("H(A)+H(B)", d))
        if h["Z"] != r_out + r_conn:
            failures.append(("H(Z)", d))
    return MayerVietorisReport(not failures, rows, failures)


# ----------------------------------------------------------------------------
# gluing bound harness


def union_complex(*parts: SimplicialComplex) -> SimplicialComplex:
    verts: list[str] = []
    seen = set()
    for K in parts:
        for v in K.vertices:
            if v not in seen:
                seen.add(v)
                verts.append(v)
    facets = [f for K in parts for f in K.facets()]
    return SimplicialComplex.explicit(verts, facets)


@dataclass
class GluingReport:
    tau: tuple
    hypotheses: dict
    cd_result: int
    bound: int
    consistent_shape: bool

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def holds(self) -> bool:
        return self.consistent_shape and (not self.hypotheses_hold or self.cd_result <= self.bound)

    def to_json(self) -> dict:
        return {
            "tau": list(self.tau),
            "hypotheses": self.hypotheses,
            "cd": self.cd_result,
            "bound": self.bound,
            "consistent_shape": self.consistent_shape,
            "holds": self.holds,
        }


def gluing_cd_check(Z: SimplicialComplex, A: SimplicialComplex, B: SimplicialComplex,
                    Bprime: SimplicialComplex, glued: SimplicialComplex, n: int,
                    tau: tuple = (), restarts: int = 32, seed: int = 0,
                    coeffs: str = "Z") -> GluingReport:
    """Given Z = A u_C B with B collapsible, cd(Z) <= n-1 and cd(B') <= n-1, check
    that ``glued`` = A u_C B' has cd <= n-1.  ``consistent_shape`` records that
    ``glued`` really is that union with the same C."""
    sa, sb = _label_simplices(A, None), _label_simplices(B, None)
    sbp, sg = _label_simplices(Bprime, None), _label_simplices(glued, None)
    sz = _label_simplices(Z, None)
    c = sa & sb
    shape = (sa | sb == sz) and (sa | sbp == sg) and (sa & sbp == c)
    hyp = {
        "B_collapsible": bool(B.n) and collapse(B, restarts=restarts, seed=seed).contractible,
        "cd_Z_bounded": _cd_or_minus_one(Z, coeffs) <= n - 1,
        "cd_Bprime_bounded": _cd_or_minus_one(Bprime, coeffs) <= n - 1,
    }
    return GluingReport(tuple(tau), hyp, _cd_or_minus_one(glued, coeffs), n - 1, shape)


def filtration_gluings(T: SimplicialComplex, sigma, n: int, coeffs: str = "Z") -> list[GluingReport]:
    """Every gluing step that grows the sphere filtration of ``sigma``, one class at a time."""
    F = sphere_filtration(T, sigma)
    sigma = F.sigma
    reports = []
    current = set(F.stages[0])
    for i in range(1, len(F.stages)):
        for tau in F.faces_of_codim(i):
            Zc = link(T, tau)
            hat = sigma - tau
            A = full_subcomplex(Zc, [v for v in Zc.vertices if v not in hat])
            B = combinatorial_ball(Zc, hat)
            Bprime = full_subcomplex(F.sphere, current)
            current |= F.classes[tau]
            glued = full_subcomplex(F.sphere, current)
            reports.append(gluing_cd_check(Zc, A, B, Bprime, glued, n, tuple(sorted(tau)), coeffs=coeffs))
    return reports
