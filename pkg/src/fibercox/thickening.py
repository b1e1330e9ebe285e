"""Thickenings of cube complexes: a simplicial complex on a set Y mapping onto the
vertices of X, where a subset spans a simplex iff its image lies in one cube."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .bitset import bit_list, iter_bits, popcount
from .complexes import SimplicialComplex, is_flag, link, same_complex
from .cubical import CubeComplex, cube_link, minimal_cube
from .errors import PreconditionError

DEFAULT_IMPLICIT_THRESHOLD = 5000


def pair_label(v: str, w: str) -> str:
    return f"{v}|{w}"


def split_pair(y: str) -> tuple[str, str]:
    v, _, w = y.partition("|")
    return v, w


@dataclass(frozen=True)
class AlphaMap:
    """A map Y -> V(X), kept in the order of ``domain``."""

    domain: tuple
    assignment: Mapping[str, str]

    def __post_init__(self):
        missing = [y for y in self.domain if y not in self.assignment]
        if missing:
            raise PreconditionError(f"alpha is undefined on {missing[0]!r}")

    def __call__(self, y: str) -> str:
        return self.assignment[y]

    def image(self) -> set:
        return set(self.assignment[y] for y in self.domain)

    def fibers(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for y in self.domain:
            out.setdefault(self.assignment[y], []).append(y)
        return out

    def check_surjective(self, X: CubeComplex) -> None:
        img = self.image()
        stray = img - set(X.vertices)
        if stray:
            raise PreconditionError(f"alpha hits {sorted(stray)[0]!r}, which is not a vertex of X")
        for v in X.vertices:
            if v not in img:
                raise PreconditionError(f"alpha is not surjective: nothing maps to {v!r}")

    def to_json(self) -> dict:
        return {"domain": list(self.domain), "map": {y: self.assignment[y] for y in self.domain}}

    @classmethod
    def from_json(cls, data: Mapping) -> "AlphaMap":
        return cls(tuple(data["domain"]), dict(data["map"]))

    @classmethod
    def identity(cls, vertices: Sequence[str]) -> "AlphaMap":
        return cls(tuple(vertices), {v: v for v in vertices})


@dataclass
class Thickening:
    """Explicit thickening.  ``complex`` is the flag complex of the 1-skeleton when
    the flag audit passes, otherwise the facet-listed complex."""

    base: CubeComplex
    alpha: AlphaMap
    complex: SimplicialComplex
    flag_audit: tuple = (True, None)
    notes: list = field(default_factory=list)

    @property
    def vertices(self) -> tuple:
        return self.complex.vertices

    @property
    def n(self) -> int:
        return self.complex.n

    @property
    def is_flag(self) -> bool:
        return bool(self.flag_audit[0])

    def image_mask(self, simplex: Iterable[str]) -> int:
        return self.base.mask(self.alpha(y) for y in simplex)

    def spans_simplex(self, simplex: Iterable[str]) -> bool:
        """Predicate form of the definition: the image lies in a common cube."""
        m = self.image_mask(simplex)
        if not m:
            return True
        start = self.base._vertex_cubes[bit_list(m)[0]]
        return any(self.base.cube_mask(c) & m == m for c in start)

    def stats(self) -> dict:
        return {
            "vertices": self.n,
            "edges": sum(popcount(a) for a in self.complex.adjacency) // 2,
            "flag": self.is_flag,
            "mode": "explicit",
        }

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "alpha": self.alpha.to_json(), "stats": self.stats()}

    @classmethod
    def from_json(cls, data: Mapping) -> "Thickening":
        return build_th_alpha(CubeComplex.from_json(data["base"]), AlphaMap.from_json(data["alpha"]))


def _thicken(X: CubeComplex, alpha: AlphaMap) -> Thickening:
    Y = alpha.domain
    yindex = {y: i for i, y in enumerate(Y)}
    fiber_mask = [0] * X.n
    for y in Y:
        fiber_mask[X.index[alpha(y)]] |= 1 << yindex[y]
    facets = []
    for cid in X.maximal_cube_ids():
        f = 0
        for v in iter_bits(X.cube_mask(cid)):
            f |= fiber_mask[v]
        facets.append(f)
    explicit = SimplicialComplex(Y, facets=facets)
    ok, witness = is_flag(explicit)
    if ok:
        return Thickening(X, alpha, explicit.as_flag(), (True, None))
    return Thickening(X, alpha, explicit, (False, tuple(sorted(witness))),
                      ["pairwise adjacency does not imply a common cube; explicit facets kept"])


def build_th_alpha(X: CubeComplex, alpha: AlphaMap) -> Thickening:
    alpha.check_surjective(X)
    return _thicken(X, alpha)


def build_th1(X: CubeComplex) -> Thickening:
    return _thicken(X, AlphaMap.identity(X.vertices))


# ----------------------------------------------------------------------------
# ordered-pair thickening


def far_lists(X: CubeComplex) -> list[list[int]]:
    """For each vertex, the vertices sharing no cube with it (cubical distance >= 2)."""
    full = X.full_mask
    return [bit_list(full & ~(X.cube_adjacency[a] | (1 << a))) for a in range(X.n)]


def far_pairs(X: CubeComplex) -> list[tuple[int, int]]:
    """Ordered pairs (v, w) at cubical distance >= 2 (or in different components)."""
    return [(a, b) for a, row in enumerate(far_lists(X)) for b in row]


def _check_pairs(X: CubeComplex, far: Sequence[Sequence[int]]) -> None:
    if not any(far):
        raise PreconditionError("thickening empty: no vertex pair is at cubical distance >= 2")
    for v in range(X.n):
        if not far[v]:
            raise PreconditionError(
                f"alpha is not surjective: {X.vertices[v]!r} is within cubical distance 1 of every vertex"
            )


def build_pair_thickening(X: CubeComplex, threshold: int = DEFAULT_IMPLICIT_THRESHOLD):
    """Vertices are ordered pairs at cubical distance >= 2, labeled "v|w", mapped to
    their first entry.  Above ``threshold`` vertices an implicit view is returned."""
    if not X.is_connected():
        raise PreconditionError("the pair thickening needs a connected complex")
    far = far_lists(X)
    _check_pairs(X, far)
    if sum(map(len, far)) > threshold:
        return ImplicitPairThickening(X, far), None
    pairs = [(a, b) for a, row in enumerate(far) for b in row]
    labels = tuple(pair_label(X.vertices[a], X.vertices[b]) for a, b in pairs)
    alpha = AlphaMap(labels, {y: X.vertices[a] for y, (a, _) in zip(labels, pairs)})
    return _thicken(X, alpha), alpha


def section_retraction_check(Th: Thickening, s: Mapping[str, str]) -> bool:
    """The image of a section spans a copy of Th1(X) and carries all the homology."""
    from .homology import complex_homology

    X = Th.base
    for v in X.vertices:
        y = s.get(v)
        if y is None or y not in Th.complex.index or Th.alpha(y) != v:
            raise PreconditionError(f"not a section of alpha at {v!r}")
    image = Th.complex.restrict(Th.complex.mask(s[v] for v in X.vertices))
    back = {s[v]: v for v in X.vertices}
    copy = image.relabel(back)
    if not same_complex(copy, build_th1(X).complex):
        return False
    for coeffs in ("GF2", "Q", "Z"):
        if not same_homology(complex_homology(Th.complex, coeffs, reduced=True),
                             complex_homology(image, coeffs, reduced=True)):
            return False
    return True


def same_homology(a, b) -> bool:
    degs = set(a.nonzero_degrees()) | set(b.nonzero_degrees())
    return all(
        a.betti.get(d, 0) == b.betti.get(d, 0) and sorted(a.torsion.get(d, [])) == sorted(b.torsion.get(d, []))
        for d in degs
    )


@dataclass
class JoinDecomposition:
    sigma: tuple
    cube: object
    lk_prime: SimplicialComplex
    lk_second: SimplicialComplex
    guarantees: dict

    @property
    def holds(self) -> bool:
        return all(self.guarantees.values())

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "cube": sorted(self.cube.vertices),
            "lk_prime": sorted(self.lk_prime.vertices),
            "lk_second": sorted(self.lk_second.vertices),
            "guarantees": self.guarantees,
        }


def link_join_decomposition(Th: Thickening, sigma) -> JoinDecomposition:
    """Split lk(sigma) into the part over the minimal cube of alpha(sigma) and the rest."""
    from .homology import complex_homology

    sigma = frozenset(sigma)
    K = Th.complex
    s = K.mask(sigma)
    if not K.contains_mask(s):
        raise PreconditionError(f"{sorted(sigma)} is not a simplex of the thickening")
    X = Th.base
    lk = link(K, sigma)
    cube = minimal_cube(X, {Th.alpha(y) for y in sigma}) if sigma else None
    over = X.mask(cube.vertices) if cube else 0
    prime = [y for y in Th.vertices if y not in sigma and X.index[Th.alpha(y)] in bit_list(over)]
    second = [y for y in lk.vertices if not (over >> X.index[Th.alpha(y)] & 1)]
    lk1 = K.restrict(K.mask(prime))
    lk2 = K.restrict(K.mask(second))
    adj = K.adjacency
    pm, sm = K.mask(prime), K.mask(second)
    joined = all(adj[i] & sm == sm for i in iter_bits(pm))
    spans = set(prime) | set(second) == set(lk.vertices) and len(prime) + len(second) == lk.n
    simplex = all((adj[i] | (1 << i)) & pm == pm for i in iter_bits(pm))
    if cube is not None:
        clink = cube_link(X, cube)
        homology_ok = all(
            same_homology(complex_homology(lk2, c, reduced=True), complex_homology(clink, c, reduced=True))
            for c in ("GF2", "Q", "Z")
        )
    else:
        homology_ok = True
    guarantees = {
        "join": bool(joined and spans),
        "prime_is_simplex": bool(simplex),
        "second_matches_cube_link": bool(homology_ok),
    }
    return JoinDecomposition(tuple(sorted(sigma)), cube, lk1, lk2, guarantees)


# ----------------------------------------------------------------------------
# implicit view for large pair thickenings


class ImplicitPairThickening:
    """Pair thickening held as per-vertex far lists; nothing global is expanded.

    Vertex ids run over ``(v, w)`` in lexicographic index order.  Two ids are
    adjacent iff their first entries are equal or share a cube of the base.
    """

    def __init__(self, X: CubeComplex, far: Sequence[Sequence[int]] | None = None):
        self.base = X
        if far is None:
            far = far_lists(X)
            _check_pairs(X, far)
        self.far = [tuple(sorted(f)) for f in far]
        self.offsets = [0]
        for f in self.far:
            self.offsets.append(self.offsets[-1] + len(f))
        self.near = [X.cube_adjacency[v] | (1 << v) for v in range(X.n)]

    @property
    def n(self) -> int:
        return self.offsets[-1]

    def pair(self, y: int) -> tuple[int, int]:
        import bisect

        a = bisect.bisect_right(self.offsets, y) - 1
        return a, self.far[a][y - self.offsets[a]]

    def pair_id(self, a: int, b: int) -> int:
        import bisect

        j = bisect.bisect_left(self.far[a], b)
        if j == len(self.far[a]) or self.far[a][j] != b:
            raise PreconditionError("not a vertex of the pair thickening")
        return self.offsets[a] + j

    def label(self, y: int) -> str:
        a, b = self.pair(y)
        return pair_label(self.base.vertices[a], self.base.vertices[b])

    def alpha(self, y: int) -> int:
        return self.pair(y)[0]

    def adjacent(self, y: int, z: int) -> bool:
        if y == z:
            return False
        return bool(self.near[self.alpha(y)] >> self.alpha(z) & 1)

    def degree(self, y: int) -> int:
        return sum(len(self.far[u]) for u in iter_bits(self.near[self.alpha(y)])) - 1

    def stats(self) -> dict:
        return {"vertices": self.n, "mode": "implicit", "base_vertices": self.base.n}

    def fiber_square(self, cycle: Sequence[int]) -> tuple[int, int, int, int]:
        """Lift a base 4-cycle to thickening vertices (first far partner in each fiber)."""
        return tuple(self.offsets[a] for a in cycle)

    def square_is_chordless(self, ys: Sequence[int]) -> bool:
        a, b, c, d = ys
        return (self.adjacent(a, b) and self.adjacent(b, c) and self.adjacent(c, d)
                and self.adjacent(d, a) and not self.adjacent(a, c) and not self.adjacent(b, d))
