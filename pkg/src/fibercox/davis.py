"""Right-angled Coxeter groups, their word problem, and the finite quotient of the
Davis cube complex by the kernel of the map to (Z/2)^V."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bitset import bit_list, is_connected, iter_bits, popcount
from .complexes import (
    DEFAULT_CELL_BUDGET,
    Graph,
    SimplicialComplex,
    is_flag,
    is_k_large,
    iter_cliques,
    same_complex,
)
from .cubical import (
    CubeComplex,
    check_5_large,
    check_no_disconnecting_cubes,
    check_no_isolated_corners,
    vertex_link,
)
from .errors import BudgetExceeded, DisconnectedError, PreconditionError


@dataclass
class RACG:
    """Generators are the vertices of ``graph``; adjacent generators commute."""

    graph: Graph
    cliques: tuple = ()

    def __post_init__(self):
        if not self.cliques:
            full = (1 << len(self.graph.vertices)) - 1
            self.cliques = tuple(sorted(iter_cliques(self.graph.adj, full), key=lambda m: (popcount(m), m)))

    @property
    def generators(self) -> tuple:
        return self.graph.vertices

    @property
    def rank(self) -> int:
        return len(self.graph.vertices)

    def clique_counts(self) -> list[int]:
        """Number of cliques of each size, the empty clique included."""
        out: list[int] = []
        for m in self.cliques:
            k = popcount(m)
            while len(out) <= k:
                out.append(0)
            out[k] += 1
        return out

    def commute(self, a: int, b: int) -> bool:
        return a == b or bool(self.graph.adj[a] >> b & 1)

    def abelianization_order(self) -> int:
        return 1 << self.rank

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(), "clique_counts": self.clique_counts()}


def racg_from_complex(L: SimplicialComplex) -> RACG:
    ok, witness = is_flag(L)
    if not ok:
        raise PreconditionError(f"not a flag complex: {sorted(witness)} spans no simplex")
    return RACG(L.graph())


def racg_from_graph(graph: Graph) -> RACG:
    return RACG(graph)


def is_hyperbolic_racg(graph: Graph):
    """No induced square in the defining graph (flag-no-square)."""
    return is_k_large(SimplicialComplex.from_graph(graph), 5)


# ----------------------------------------------------------------------------
# words


def _letters(G: RACG, word) -> list[int]:
    index = G.graph.index
    if isinstance(word, str):
        word = list(word) if word not in index else [word]
    out = []
    for x in word:
        if x not in index:
            raise PreconditionError(f"unknown generator {x!r}")
        out.append(index[x])
    return out


def _reduce(G: RACG, w: list[int]) -> list[int]:
    """Delete pairs s ... s whose middle letters all commute with s."""
    changed = True
    while changed:
        changed = False
        for i in range(len(w)):
            s = w[i]
            for j in range(i + 1, len(w)):
                if w[j] == s:
                    del w[j]
                    del w[i]
                    changed = True
                    break
                if not G.commute(s, w[j]):
                    break
            if changed:
                break
    return w


def _shortlex(G: RACG, w: list[int]) -> list[int]:
    """Repeatedly pull the smallest letter that commutes past everything before it."""
    w = list(w)
    out = []
    while w:
        best = None
        for i, s in enumerate(w):
            if best is None or s < w[best]:
                if all(G.commute(s, w[k]) for k in range(i)):
                    best = i
        out.append(w.pop(best))
    return out


def normal_form_indices(G: RACG, w: Sequence[int]) -> tuple[int, ...]:
    return tuple(_shortlex(G, _reduce(G, list(w))))


def racg_normal_form(G: RACG, word) -> tuple[str, ...]:
    nf = normal_form_indices(G, _letters(G, word))
    return tuple(G.generators[i] for i in nf)


# ----------------------------------------------------------------------------
# level-2 quotient


def quotient_f_vector(G: RACG) -> list[int]:
    n = G.rank
    return [(1 << n) * c >> d for d, c in enumerate(G.clique_counts())]


def vertex_label(g: int, n: int) -> str:
    return "".join("1" if g >> i & 1 else "0" for i in range(n))


@dataclass
class DavisQuotient:
    group: RACG
    complex: CubeComplex

    def to_json(self) -> dict:
        data = self.complex.to_json()
        data["generators"] = list(self.group.generators)
        return data


def level2_quotient(G: RACG, budget: int = DEFAULT_CELL_BUDGET) -> DavisQuotient:
    """Vertices are bit vectors g; each clique T and each g with zero T-coordinates
    gives the cube {g + sum of e_s over s in S : S subset of T}."""
    n = G.rank
    predicted = quotient_f_vector(G)
    if sum(predicted) > budget:
        raise BudgetExceeded(f"quotient would have {sum(predicted)} cubes, over the budget of {budget}")
    full = (1 << n) - 1
    maximal = [m for m in G.cliques if m and not any(o != m and o & m == m for o in G.cliques)]
    arrays = []
    for T in maximal:
        idx = bit_list(T)
        rest = full & ~T
        sub = rest
        while True:
            g = sub
            arr = []
            for b in range(1 << len(idx)):
                x = g
                for j, i in enumerate(idx):
                    if b >> j & 1:
                        x |= 1 << i
                arr.append(x)
            arrays.append(tuple(arr))
            if sub == 0:
                break
            sub = (sub - 1) & rest
    labels = [vertex_label(g, n) for g in range(1 << n)]
    X = CubeComplex._from_index_arrays(labels, arrays)
    return DavisQuotient(G, X)


# ----------------------------------------------------------------------------
# checks


def _spherical_elements(G: RACG) -> list[tuple[int, ...]]:
    return [tuple(bit_list(m)) for m in G.cliques]


@dataclass
class EmbeddingReport:
    injective: bool
    ball_size: int
    witness: tuple | None = None
    criterion: str = "abelianization injective on elements within cubical distance 2 of the identity"

    def __bool__(self):
        return self.injective

    def to_json(self) -> dict:
        return {
            "injective": self.injective,
            "ball_size": self.ball_size,
            "witness": [list(w) for w in self.witness] if self.witness else None,
            "criterion": self.criterion,
        }


def two_neighborhood_embedding_check(G: RACG, X: DavisQuotient | None = None) -> EmbeddingReport:
    """Products u.v of spherical elements, in normal form, must have distinct images
    in (Z/2)^V."""
    sph = _spherical_elements(G)
    seen: dict[int, tuple[int, ...]] = {}
    for u in sph:
        for v in sph:
            nf = normal_form_indices(G, u + v)
            image = 0
            for s in nf:
                image ^= 1 << s
            prev = seen.get(image)
            if prev is None:
                seen[image] = nf
            elif prev != nf:
                names = lambda w: tuple(G.generators[i] for i in w)  # noqa: E731
                return EmbeddingReport(False, len(seen), (names(prev), names(nf)))
    return EmbeddingReport(True, len(seen))


def check_one_ended(L: SimplicialComplex):
    """``(True, None)`` or ``(False, sigma)``: every simplex complement must be
    nonempty and connected."""
    full = L.full_mask
    adj = L.adjacency
    for s in L.simplex_masks(include_empty=True):
        rest = full & ~s
        if not rest or not is_connected(adj, rest):
            return False, L.ordered(s)
    return True, None


def links_match_defining_complex(Q: DavisQuotient, vertices: Iterable[str] | None = None):
    """Each vertex link, with the edge to g + e_s named s, equals flag(Gamma)."""
    G = Q.group
    X = Q.complex
    n = G.rank
    target = SimplicialComplex.from_graph(G.graph).expanded()
    targets = X.vertices if vertices is None else list(vertices)
    for v in targets:
        g = X.index[v]

        def label(C, g=g):
            (other,) = [X.index[u] for u in C.vertices if X.index[u] != g]
            return G.generators[(other ^ g).bit_length() - 1]

        lk = vertex_link(X, v, label)
        if not same_complex(lk, target):
            return False, v
    return True, None


@dataclass
class QuotientReport:
    checks: dict
    passed: bool
    inductive_input: bool
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "inductive_input": self.inductive_input,
            "failures": self.failures,
            "checks": self.checks,
        }


def verify_quotient_properties(Q: DavisQuotient, expected_cd: int | None = None, coeffs: str = "Z",
                               restarts: int = 32, seed: int = 0,
                               budget: int = DEFAULT_CELL_BUDGET) -> QuotientReport:
    """Properties a quotient needs before it can be thickened again.

    Translations by (Z/2)^V act transitively on vertices, so 2-neighborhoods are
    checked at the zero vector only; links are checked everywhere.
    """
    from .homology import complex_homology

    X = Q.complex
    G = Q.group
    checks: dict = {}
    failures: list = []
    fv = X.f_vector()
    checks["f_vector"] = fv
    checks["f_vector_matches_count"] = fv == quotient_f_vector(G)
    if not checks["f_vector_matches_count"]:
        failures.append("f_vector")
    ok, bad = links_match_defining_complex(Q)
    checks["links_match_defining_complex"] = ok if ok else {"vertex": bad}
    if not ok:
        failures.append("links")
    zero = X.vertices[0]
    cert = check_5_large(X, vertices=[zero], restarts=restarts, seed=seed,
                         symmetry_note="translations act transitively; 2-neighborhood checked at the zero vector")
    checks["five_large"] = cert.to_json()
    corners, cw = check_no_isolated_corners(X)
    checks["no_isolated_corners"] = True if corners else {"cube": sorted(cw[0].vertices), "corner": cw[1]}
    if not corners:
        failures.append("isolated_corners")
    try:
        disc, dw = check_no_disconnecting_cubes(X)
        checks["no_disconnecting_cubes"] = True if disc else {"cube": sorted(dw.vertices)}
    except DisconnectedError as exc:
        disc = False
        checks["no_disconnecting_cubes"] = {"disconnected": sorted(exc.component)[:5]}
    if not disc:
        failures.append("disconnecting_cubes")
    hom = complex_homology(X, coeffs, reduced=False, cohomology=True, budget=budget)
    top = hom.top_degree()
    cd = 0 if top is None else top
    checks["cohomology"] = hom.to_json()
    checks["cd"] = cd
    if expected_cd is not None:
        checks["expected_cd"] = expected_cd
        checks["cd_matches"] = cd == expected_cd
        if cd != expected_cd:
            failures.append("cd")
    emb = two_neighborhood_embedding_check(G, Q)
    checks["two_neighborhood_embedding"] = emb.to_json()
    inductive = not failures and cert.status == "certified" and emb.injective
    return QuotientReport(checks, not failures, inductive, failures)
