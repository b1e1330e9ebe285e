"""Finite graphs and simplicial complexes.

Vertex sets are held internally as int bitmasks over a fixed vertex order; the
public surface speaks in vertex labels (strings) and ``frozenset`` simplices.
A complex is either *flag* (stored by its 1-skeleton, simplices are cliques)
or *explicit* (stored by facets).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .bitset import bit_list, component_of, components, iter_bits, lowest, popcount
from .errors import BudgetExceeded, PreconditionError

DEFAULT_CELL_BUDGET = 10**7

Simplex = frozenset


class Graph:
    """Finite simple graph with a stable vertex order."""

    def __init__(self, vertices: Iterable, edges: Iterable = ()):
        self.vertices = tuple(str(v) for v in vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise PreconditionError("duplicate vertex labels")
        adj = [0] * len(self.vertices)
        edge_set = set()
        for e in edges:
            a, b = (str(x) for x in e)
            if a == b:
                raise PreconditionError(f"self-loop at {a!r}")
            if a not in self.index or b not in self.index:
                raise PreconditionError(f"edge {a!r}-{b!r} has an undeclared endpoint")
            i, j = self.index[a], self.index[b]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
            edge_set.add(frozenset((a, b)))
        self.adj = tuple(adj)
        self.edges = frozenset(edge_set)

    @classmethod
    def from_adjacency(cls, vertices: Sequence[str], adj: Sequence[int]) -> "Graph":
        g = cls.__new__(cls)
        g.vertices = tuple(vertices)
        g.index = {v: i for i, v in enumerate(g.vertices)}
        g.adj = tuple(adj)
        g.edges = frozenset(
            frozenset((g.vertices[i], g.vertices[j]))
            for i in range(len(adj))
            for j in iter_bits(adj[i])
            if i < j
        )
        return g

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def has_edge(self, a, b) -> bool:
        return bool(self.adj[self.index[a]] >> self.index[b] & 1)

    def neighbors(self, v) -> list[str]:
        return [self.vertices[j] for j in iter_bits(self.adj[self.index[v]])]

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for v in labels:
            if v not in self.index:
                raise PreconditionError(f"unknown vertex {v!r}")
            m |= 1 << self.index[v]
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.vertices[i] for i in iter_bits(mask))

    def components(self, within: Iterable[str] | None = None) -> list[frozenset]:
        allowed = (1 << len(self.vertices)) - 1 if within is None else self.mask(within)
        return [self.labels(c) for c in components(self.adj, allowed)]

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def induced(self, labels: Iterable[str]) -> "Graph":
        keep = set(labels)
        verts = [v for v in self.vertices if v in keep]
        return Graph(verts, [tuple(e) for e in self.edges if e <= keep])

    def to_json(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "edges": sorted(sorted(e) for e in self.edges),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Graph":
        return cls(data["vertices"], data.get("edges", []))


def cycle_graph(k: int, prefix: str = "x") -> Graph:
    verts = [f"{prefix}{i}" for i in range(1, k + 1)]
    return Graph(verts, [(verts[i], verts[(i + 1) % k]) for i in range(k)])


# ----------------------------------------------------------------------------
# clique machinery on adjacency bitmasks


def iter_cliques(adj: Sequence[int], within: int, budget: int | None = None):
    """Yield every clique (including the empty one) of the graph induced on ``within``."""
    count = 0
    stack = [(0, within)]
    while stack:
        clique, cand = stack.pop()
        count += 1
        if budget is not None and count > budget:
            raise BudgetExceeded(f"more than {budget} simplices")
        yield clique
        for v in iter_bits(cand):
            higher = cand & ~((1 << (v + 1)) - 1)
            stack.append((clique | (1 << v), higher & adj[v]))


def maximal_cliques(adj: Sequence[int], within: int) -> list[int]:
    """Bron-Kerbosch with pivoting; returns all maximal cliques of the induced subgraph."""
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        px = p | x
        pivot = max(iter_bits(px), key=lambda u: popcount(adj[u] & p))
        for v in iter_bits(p & ~adj[pivot]):
            nv = adj[v]
            expand(r | (1 << v), p & nv, x & nv)
            p &= ~(1 << v)
            x |= 1 << v

    if within:
        expand(0, within, 0)
    return out


def _maximal_only(sets: Iterable[int]) -> list[int]:
    uniq = sorted(set(s for s in sets if s), key=popcount, reverse=True)
    kept: list[int] = []
    for s in uniq:
        if not any(s & ~k == 0 for k in kept):
            kept.append(s)
    return kept


# ----------------------------------------------------------------------------


class SimplicialComplex:
    """Immutable finite simplicial complex, flag-of-graph or facet-listed."""

    def __init__(self, vertices: Sequence[str], *, adj: Sequence[int] | None = None,
                 facets: Sequence[int] | None = None):
        # Private constructor; use ``flag`` / ``explicit`` / ``from_graph``.
        self.vertices = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise PreconditionError("duplicate vertex labels")
        n = len(self.vertices)
        if adj is not None:
            self.mode = "flag"
            self._adj = tuple(adj)
            self._facets = None
        else:
            self.mode = "explicit"
            full = (1 << n) - 1
            covered = 0
            for f in facets:
                covered |= f
            if covered & ~full:
                raise PreconditionError("facet uses an undeclared vertex")
            extra = [1 << i for i in iter_bits(full & ~covered)]
            self._facets = tuple(_maximal_only(list(facets) + extra))
            a = [0] * n
            for f in self._facets:
                for i in iter_bits(f):
                    a[i] |= f
            self._adj = tuple(a[i] & ~(1 << i) for i in range(n))

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_graph(cls, graph: Graph) -> "SimplicialComplex":
        return cls(graph.vertices, adj=graph.adj)

    @classmethod
    def flag(cls, vertices: Sequence[str], edges: Iterable = ()) -> "SimplicialComplex":
        return cls.from_graph(Graph(vertices, edges))

    @classmethod
    def explicit(cls, vertices: Sequence[str], facets: Iterable[Iterable[str]]) -> "SimplicialComplex":
        verts = tuple(str(v) for v in vertices)
        index = {v: i for i, v in enumerate(verts)}
        masks = []
        for f in facets:
            m = 0
            for v in f:
                if str(v) not in index:
                    raise PreconditionError(f"facet vertex {v!r} is not declared")
                m |= 1 << index[str(v)]
            masks.append(m)
        return cls(verts, facets=masks)

    @classmethod
    def simplex(cls, vertices: Sequence[str]) -> "SimplicialComplex":
        verts = tuple(vertices)
        return cls(verts, facets=[(1 << len(verts)) - 1] if verts else [])

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls((), facets=[])

    # -- basic queries ------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def adjacency(self) -> tuple[int, ...]:
        return self._adj

    @property
    def full_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    def __repr__(self):
        return f"SimplicialComplex({self.mode}, |V|={self.n})"

    def is_empty(self) -> bool:
        return not self.vertices

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for v in labels:
            try:
                m |= 1 << self.index[v]
            except KeyError:
                raise PreconditionError(f"unknown vertex {v!r}") from None
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.vertices[i] for i in iter_bits(mask))

    def ordered(self, mask: int) -> tuple[str, ...]:
        return tuple(self.vertices[i] for i in iter_bits(mask))

    def graph(self) -> Graph:
        return Graph.from_adjacency(self.vertices, self._adj)

    def contains_mask(self, m: int) -> bool:
        if m & ~self.full_mask:
            return False
        if self.mode == "flag":
            return all((self._adj[i] | (1 << i)) & m == m for i in iter_bits(m))
        return m == 0 or any(m & ~f == 0 for f in self._facets)

    def __contains__(self, simplex) -> bool:
        try:
            return self.contains_mask(self.mask(simplex))
        except PreconditionError:
            return False

    def facet_masks(self) -> tuple[int, ...]:
        if self._facets is None:
            self._facets = tuple(maximal_cliques(self._adj, self.full_mask))
        return self._facets

    def facets(self) -> list[frozenset]:
        return [self.labels(f) for f in self.facet_masks()]

    def dimension(self) -> int:
        return max((popcount(f) for f in self.facet_masks()), default=0) - 1

    def simplex_masks(self, budget: int | None = DEFAULT_CELL_BUDGET, include_empty=False) -> list[int]:
        """All simplices, ordered by dimension then by sorted vertex indices."""
        if self.mode == "flag":
            out = list(iter_cliques(self._adj, self.full_mask, None if budget is None else budget + 1))
        else:
            seen: set[int] = set()
            for f in self._facets:
                verts = bit_list(f)
                if budget is not None and (1 << len(verts)) > budget + 1:
                    raise BudgetExceeded(f"facet with {len(verts)} vertices exceeds the cell budget")
                for r in range(len(verts) + 1):
                    for combo in itertools.combinations(verts, r):
                        m = 0
                        for i in combo:
                            m |= 1 << i
                        seen.add(m)
                if budget is not None and len(seen) > budget + 1:
                    raise BudgetExceeded(f"more than {budget} simplices")
            seen.add(0)
            out = list(seen)
        if budget is not None and len(out) > budget + 1:
            raise BudgetExceeded(f"more than {budget} simplices")
        out.sort(key=lambda m: (popcount(m), bit_list(m)))
        if not include_empty:
            out = [m for m in out if m]
        return out

    def simplices(self, budget: int | None = DEFAULT_CELL_BUDGET, include_empty=False) -> list[frozenset]:
        return [self.labels(m) for m in self.simplex_masks(budget, include_empty)]

    def f_vector(self, budget: int | None = DEFAULT_CELL_BUDGET) -> list[int]:
        counts: dict[int, int] = {}
        for m in self.simplex_masks(budget):
            d = popcount(m) - 1
            counts[d] = counts.get(d, 0) + 1
        return [counts.get(d, 0) for d in range(max(counts, default=-1) + 1)]

    # -- derived complexes --------------------------------------------------

    def restrict(self, keep: int) -> "SimplicialComplex":
        """Full subcomplex on the vertex bitmask ``keep`` (vertex order preserved)."""
        keep &= self.full_mask
        old = bit_list(keep)
        remap = {o: i for i, o in enumerate(old)}

        def move(m: int) -> int:
            r = 0
            for o in iter_bits(m & keep):
                r |= 1 << remap[o]
            return r

        verts = [self.vertices[o] for o in old]
        if self.mode == "flag":
            return SimplicialComplex(verts, adj=[move(self._adj[o]) for o in old])
        return SimplicialComplex(verts, facets=[move(f) for f in self._facets if f & keep])

    def expanded(self, budget: int | None = DEFAULT_CELL_BUDGET) -> "SimplicialComplex":
        """Explicit (facet-listed) version of this complex."""
        if self.mode == "explicit":
            return self
        facets = self.facet_masks()
        return SimplicialComplex(self.vertices, facets=facets)

    def as_flag(self) -> "SimplicialComplex":
        """Flag complex on the same 1-skeleton (equal to self iff self is flag)."""
        return SimplicialComplex(self.vertices, adj=self._adj)

    def relabel(self, mapping: Mapping[str, str]) -> "SimplicialComplex":
        verts = [mapping[v] for v in self.vertices]
        if self.mode == "flag":
            return SimplicialComplex(verts, adj=self._adj)
        return SimplicialComplex(verts, facets=self._facets)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        if self.mode == "flag":
            g = self.graph()
            return {"vertices": sorted(self.vertices), "edges": sorted(sorted(e) for e in g.edges)}
        return {
            "vertices": sorted(self.vertices),
            "facets": sorted(sorted(f) for f in self.facets()),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SimplicialComplex":
        if "facets" in data:
            return cls.explicit(data["vertices"], data["facets"])
        return cls.flag(data["vertices"], data.get("edges", []))


def same_complex(a: SimplicialComplex, b: SimplicialComplex) -> bool:
    """Equality as labeled complexes: same vertex labels, same simplices."""
    if set(a.vertices) != set(b.vertices):
        return False
    return set(a.facets()) == set(b.facets())


# ----------------------------------------------------------------------------
# flagness and largeness


def is_flag(K: SimplicialComplex):
    """Return ``(True, None)`` or ``(False, witness)`` with a minimal non-spanning clique."""
    if K.mode == "flag":
        return True, None
    adj = K.adjacency
    for clique in maximal_cliques(adj, K.full_mask):
        if K.contains_mask(clique):
            continue
        # shrink to a minimal non-face: every proper subset is then a face
        m = clique
        changed = True
        while changed:
            changed = False
            for i in iter_bits(m):
                smaller = m & ~(1 << i)
                if not K.contains_mask(smaller):
                    m = smaller
                    changed = True
                    break
        return False, K.labels(m)
    return True, None


def chordless_square_at(adj: Sequence[int], a: int, within: int | None = None):
    """A chordless 4-cycle through vertex ``a``, as an index tuple, or None."""
    if within is None:
        within = -1
    na = adj[a] & within
    # opposite corner c: non-adjacent to a, sharing two non-adjacent neighbours with a
    far = 0
    for b in iter_bits(na):
        far |= adj[b]
    far &= within & ~na & ~(1 << a)
    for c in iter_bits(far):
        common = na & adj[c]
        for b in iter_bits(common):
            rest = common & ~adj[b] & ~(1 << b)
            if rest:
                return (a, b, c, lowest(rest))
    return None


def chordless_squares(adj: Sequence[int], within: int | None = None) -> list[tuple[int, int, int, int]]:
    """All chordless 4-cycles, each reported once as (a, b, c, d) with a minimal."""
    n = len(adj)
    within = (1 << n) - 1 if within is None else within
    out = []
    for a in iter_bits(within):
        for c in iter_bits(within & ~adj[a] & ~((1 << (a + 1)) - 1)):
            common = adj[a] & adj[c] & within & ~((1 << (a + 1)) - 1)
            for b in iter_bits(common):
                for d in iter_bits(common & ~adj[b] & ~((1 << (b + 1)) - 1)):
                    out.append((a, b, c, d))
    return out


def _chordless_cycle(adj: Sequence[int], n: int, max_len: int):
    """Shortest induced cycle of length in [4, max_len], or None."""
    for length in range(4, max_len + 1):
        for s in range(n):
            higher = ~((1 << (s + 1)) - 1)
            stack = [(s, (s,), 1 << s)]
            while stack:
                last, path, used = stack.pop()
                if len(path) == length:
                    if adj[last] >> s & 1:
                        return path
                    continue
                for v in iter_bits(adj[last] & higher & ~used):
                    # v must avoid every earlier path vertex except the last (and s when closing)
                    inner = used & ~(1 << last)
                    if len(path) + 1 < length:
                        if adj[v] & inner:
                            continue
                    else:
                        if adj[v] & (inner & ~(1 << s)):
                            continue
                    stack.append((v, path + (v,), used | (1 << v)))
    return None


def is_k_large(K: SimplicialComplex, k: int = 5):
    """``(True, None)`` or ``(False, witness)``; witness is a chordless cycle or non-spanning clique."""
    if k < 5:
        raise PreconditionError("k-largeness is defined for k >= 5")
    flag, clique = is_flag(K)
    if not flag:
        return False, tuple(sorted(clique))
    adj = K.adjacency
    if k == 5:
        for a in range(K.n):
            sq = chordless_square_at(adj, a)
            if sq is not None:
                return False, tuple(K.vertices[i] for i in sq)
        return True, None
    cyc = _chordless_cycle(adj, K.n, k - 1)
    if cyc is not None:
        return False, tuple(K.vertices[i] for i in cyc)
    return True, None


# ----------------------------------------------------------------------------
# links, spheres, balls


def _check_simplex(K: SimplicialComplex, sigma) -> int:
    m = K.mask(sigma)
    if not K.contains_mask(m):
        raise PreconditionError(f"{sorted(sigma)} is not a simplex of the complex")
    return m


def link(K: SimplicialComplex, sigma=frozenset()) -> SimplicialComplex:
    s = _check_simplex(K, sigma)
    if not s:
        return K
    if K.mode == "flag":
        common = K.full_mask
        for i in iter_bits(s):
            common &= K.adjacency[i]
        return K.restrict(common & ~s)
    faces = [f & ~s for f in K.facet_masks() if f & s == s]
    keep = 0
    for f in faces:
        keep |= f
    sub = K.restrict(keep)
    old = bit_list(keep)
    remap = {o: i for i, o in enumerate(old)}
    moved = []
    for f in faces:
        r = 0
        for o in iter_bits(f):
            r |= 1 << remap[o]
        moved.append(r)
    return SimplicialComplex(sub.vertices, facets=moved)


def link_simplex_iso_check(K: SimplicialComplex, sigma, tau) -> bool:
    """Compare lk(sigma, K) with lk(sigma minus tau, lk(tau, K)) as labeled complexes."""
    sigma, tau = frozenset(sigma), frozenset(tau)
    if not tau <= sigma:
        raise PreconditionError("tau must be a face of sigma")
    _check_simplex(K, sigma)
    direct = link(K, sigma)
    via = link(link(K, tau), sigma - tau)
    return same_complex(direct, via)


def full_subcomplex(K: SimplicialComplex, W: Iterable[str]) -> SimplicialComplex:
    return K.restrict(K.mask(W))


def _sphere_mask(K: SimplicialComplex, s: int) -> int:
    near = 0
    for i in iter_bits(s):
        near |= K.adjacency[i]
    return near & ~s


def combinatorial_sphere(K: SimplicialComplex, sigma) -> SimplicialComplex:
    """Full subcomplex on the vertices at combinatorial distance one from ``sigma``."""
    s = _check_simplex(K, sigma)
    if not s:
        raise PreconditionError("the combinatorial sphere needs a nonempty simplex")
    return K.restrict(_sphere_mask(K, s))


def combinatorial_ball(K: SimplicialComplex, sigma) -> SimplicialComplex:
    """Union of all simplices meeting ``sigma`` (explicit, on sigma plus its sphere)."""
    s = _check_simplex(K, sigma)
    if not s:
        raise PreconditionError("the combinatorial ball needs a nonempty simplex")
    keep = s | _sphere_mask(K, s)
    facets = [f for f in K.facet_masks() if f & s]
    sub = K.restrict(keep)
    old = bit_list(keep)
    remap = {o: i for i, o in enumerate(old)}
    moved = []
    for f in facets:
        r = 0
        for o in iter_bits(f):
            r |= 1 << remap[o]
        moved.append(r)
    return SimplicialComplex(sub.vertices, facets=moved)


def closest_face_map(K: SimplicialComplex, sigma) -> dict[str, frozenset]:
    """For each sphere vertex v, the set of sigma-vertices adjacent to v."""
    s = _check_simplex(K, sigma)
    if not s:
        raise PreconditionError("the closest-face map needs a nonempty simplex")
    out = {}
    for v in iter_bits(_sphere_mask(K, s)):
        out[K.vertices[v]] = K.labels(K.adjacency[v] & s)
    return out


@dataclass(frozen=True)
class Filtration:
    """Filtration of the combinatorial sphere of ``sigma`` by closest-face codimension."""

    complex: SimplicialComplex
    sigma: frozenset
    sphere: SimplicialComplex
    stages: tuple[frozenset, ...]
    pi: Mapping[str, frozenset]
    classes: Mapping[frozenset, frozenset] = field(default_factory=dict)
    boundaries: Mapping[frozenset, frozenset] = field(default_factory=dict)

    def codimension(self, face: frozenset) -> int:
        return len(self.sigma) - len(face)

    def stage_complex(self, i: int) -> SimplicialComplex:
        return full_subcomplex(self.sphere, self.stages[i])

    def faces_of_codim(self, i: int) -> list[frozenset]:
        k = len(self.sigma) - i
        return [frozenset(c) for c in itertools.combinations(sorted(self.sigma), k)]


def sphere_filtration(K: SimplicialComplex, sigma) -> Filtration:
    sigma = frozenset(sigma)
    pi = closest_face_map(K, sigma)
    sphere = combinatorial_sphere(K, sigma)
    top = len(sigma) - 1
    stages = []
    for i in range(top + 1):
        stages.append(frozenset(v for v, f in pi.items() if len(sigma) - len(f) <= i))
    classes: dict[frozenset, frozenset] = {}
    boundaries: dict[frozenset, frozenset] = {}
    for r in range(1, len(sigma) + 1):
        for face in itertools.combinations(sorted(sigma), r):
            face = frozenset(face)
            i = len(sigma) - len(face)
            classes[face] = frozenset(v for v, f in pi.items() if f == face)
            previous = stages[i - 1] if i > 0 else frozenset()
            boundaries[face] = frozenset(link(K, face).vertices) & previous
    return Filtration(K, sigma, sphere, tuple(stages), pi, classes, boundaries)


# ----------------------------------------------------------------------------
# homotopy-preserving reduction


def dominated_core(K: SimplicialComplex) -> SimplicialComplex:
    """Strong-collapse core: repeatedly delete vertices dominated by another vertex.

    A vertex w is dominated by u != w when every facet containing w also contains u;
    deleting w is then a strong deformation retraction, so the core is homotopy
    equivalent to K.
    """
    facets = list(K.facet_masks())
    alive = K.full_mask
    changed = True
    while changed:
        changed = False
        for w in iter_bits(alive):
            inter = alive
            for f in facets:
                if f >> w & 1:
                    inter &= f
            inter &= ~(1 << w)
            if inter:
                alive &= ~(1 << w)
                facets = _maximal_only(f & ~(1 << w) for f in facets)
                changed = True
    sub = K.restrict(alive)
    old = bit_list(alive)
    remap = {o: i for i, o in enumerate(old)}
    moved = []
    for f in facets:
        r = 0
        for o in iter_bits(f & alive):
            r |= 1 << remap[o]
        moved.append(r)
    return SimplicialComplex(sub.vertices, facets=moved)
