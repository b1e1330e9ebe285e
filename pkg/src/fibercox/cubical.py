"""Finite cube complexes: closure, cubical distance, links, and the local checks
needed before a complex can be thickened."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .bitset import bit_list, component_of, components, iter_bits, lowest, popcount
from .collapse import CellPoset, collapse
from .complexes import DEFAULT_CELL_BUDGET, SimplicialComplex, is_k_large
from .errors import BudgetExceeded, DisconnectedError, HypothesisViolation, PreconditionError


def canonical_labeling(arr: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically minimal bit-string labeling of a cube's vertex array."""
    size = len(arr)
    d = size.bit_length() - 1
    b0 = min(range(size), key=lambda b: arr[b])
    coords = sorted(range(d), key=lambda i: arr[b0 ^ (1 << i)])
    out = []
    for nb in range(size):
        old = b0
        for j in range(d):
            if nb >> j & 1:
                old ^= 1 << coords[j]
        out.append(arr[old])
    return tuple(out)


def _orientation(labeling: Sequence[int], canonical: Sequence[int]) -> int:
    """+1/-1 comparing two labelings of the same cube (hyperoctahedral sign)."""
    pos = {v: b for b, v in enumerate(canonical)}
    d = len(labeling).bit_length() - 1
    c0 = pos[labeling[0]]
    perm = []
    for j in range(d):
        diff = pos[labeling[1 << j]] ^ c0
        perm.append(diff.bit_length() - 1)
    inversions = sum(1 for a in range(d) for b in range(a + 1, d) if perm[a] > perm[b])
    return -1 if (inversions + popcount(c0)) % 2 else 1


def face_array(arr: Sequence[int], coord: int, value: int) -> tuple[int, ...]:
    """Sub-array of the face where coordinate ``coord`` is frozen to ``value``."""
    d = len(arr).bit_length() - 1
    out = []
    low = (1 << coord) - 1
    for b in range(1 << (d - 1)):
        full = (b & low) | (value << coord) | ((b & ~low) << 1)
        out.append(arr[full])
    return tuple(out)


@dataclass(frozen=True)
class Cube:
    """A closed cube: its vertex labels and canonical bit-string labeling."""

    vertices: frozenset
    labeling: tuple

    @property
    def dim(self) -> int:
        return len(self.labeling).bit_length() - 1

    def to_json(self) -> dict:
        return {"dim": self.dim, "verts": list(self.labeling)}


class CubeComplex:
    """Finite cube complex stored by its cubes; the face closure is computed once."""

    def __init__(self, vertices: Sequence, cubes: Iterable = ()):
        self.vertices = tuple(str(v) for v in vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise PreconditionError("duplicate vertex labels")
        arrays = []
        for c in cubes:
            if isinstance(c, Mapping):
                dim, verts = c["dim"], c["verts"]
            elif isinstance(c, Cube):
                dim, verts = c.dim, c.labeling
            else:
                dim, verts = c
            verts = [str(v) for v in verts]
            if len(verts) != 1 << dim:
                raise PreconditionError(f"a {dim}-cube needs {1 << dim} vertices, got {len(verts)}")
            try:
                arr = tuple(self.index[v] for v in verts)
            except KeyError as exc:
                raise PreconditionError(f"cube vertex {exc.args[0]!r} is not declared") from None
            if len(set(arr)) != len(arr):
                raise PreconditionError(f"cube {verts} repeats a vertex")
            arrays.append(arr)
        for i in range(len(self.vertices)):
            arrays.append((i,))
        self._build_closure(arrays)

    @classmethod
    def _from_index_arrays(cls, vertices: Sequence[str], arrays: Iterable[tuple[int, ...]]) -> "CubeComplex":
        X = cls.__new__(cls)
        X.vertices = tuple(vertices)
        X.index = {v: i for i, v in enumerate(X.vertices)}
        X._build_closure(list(arrays) + [(i,) for i in range(len(X.vertices))])
        return X

    def _build_closure(self, arrays: list[tuple[int, ...]]) -> None:
        by_mask: dict[int, tuple[int, ...]] = {}
        stack = [canonical_labeling(a) for a in arrays]
        while stack:
            arr = stack.pop()
            m = 0
            for v in arr:
                m |= 1 << v
            prev = by_mask.get(m)
            if prev is not None:
                if len(prev) != len(arr):
                    raise PreconditionError("two cubes of different dimension share a vertex set")
                continue
            by_mask[m] = arr
            d = len(arr).bit_length() - 1
            for i in range(d):
                for e in (0, 1):
                    stack.append(canonical_labeling(face_array(arr, i, e)))
        order = sorted(by_mask, key=lambda m: (popcount(m), by_mask[m]))
        self._arrays = [by_mask[m] for m in order]
        self._masks = order
        self._where = {m: i for i, m in enumerate(order)}
        n = len(self.vertices)
        vcubes: list[list[int]] = [[] for _ in range(n)]
        for cid, m in enumerate(order):
            for v in iter_bits(m):
                vcubes[v].append(cid)
        self._vertex_cubes = vcubes
        edge_adj = [0] * n
        for m in order:
            if popcount(m) == 2:
                a, b = bit_list(m)
                edge_adj[a] |= 1 << b
                edge_adj[b] |= 1 << a
        self._edge_adj = edge_adj
        # maximal cubes: not a proper face of any other cube
        contained = set()
        for cid, m in enumerate(order):
            arr = self._arrays[cid]
            d = len(arr).bit_length() - 1
            for i in range(d):
                for e in (0, 1):
                    fm = 0
                    for v in face_array(arr, i, e):
                        fm |= 1 << v
                    contained.add(fm)
        self._maximal = [cid for cid, m in enumerate(order) if m not in contained]
        cadj = [0] * n
        for cid in self._maximal:
            m = order[cid]
            for v in iter_bits(m):
                cadj[v] |= m
        self._cube_adj = [cadj[v] & ~(1 << v) for v in range(n)]

    # -- queries ------------------------------------------------------------

    def __repr__(self):
        return f"CubeComplex(|V|={len(self.vertices)}, f={self.f_vector()})"

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    @property
    def edge_adjacency(self) -> list[int]:
        return self._edge_adj

    @property
    def cube_adjacency(self) -> list[int]:
        """Vertex bitmasks of cubical distance one (sharing a cube)."""
        return self._cube_adj

    def cube_count(self) -> int:
        return len(self._masks)

    def cube_ids(self) -> range:
        return range(len(self._masks))

    def cube_mask(self, cid: int) -> int:
        return self._masks[cid]

    def cube_array(self, cid: int) -> tuple[int, ...]:
        return self._arrays[cid]

    def cube_dim(self, cid: int) -> int:
        return len(self._arrays[cid]).bit_length() - 1

    def cube(self, cid: int) -> Cube:
        arr = self._arrays[cid]
        return Cube(frozenset(self.vertices[v] for v in arr), tuple(self.vertices[v] for v in arr))

    def cubes(self) -> list[Cube]:
        return [self.cube(c) for c in self.cube_ids()]

    def maximal_cubes(self) -> list[Cube]:
        return [self.cube(c) for c in self._maximal]

    def maximal_cube_ids(self) -> list[int]:
        return list(self._maximal)

    def cubes_at(self, v: str) -> list[int]:
        return list(self._vertex_cubes[self.index[v]])

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

    def find_cube(self, vertices: Iterable[str]) -> int | None:
        return self._where.get(self.mask(vertices))

    def cube_id(self, cube) -> int:
        verts = cube.vertices if isinstance(cube, Cube) else cube
        cid = self.find_cube(verts)
        if cid is None:
            raise PreconditionError(f"{sorted(verts)} is not a cube of the complex")
        return cid

    def f_vector(self) -> list[int]:
        counts: dict[int, int] = {}
        for arr in self._arrays:
            d = len(arr).bit_length() - 1
            counts[d] = counts.get(d, 0) + 1
        return [counts.get(d, 0) for d in range(max(counts, default=-1) + 1)]

    def dimension(self) -> int:
        return len(self.f_vector()) - 1

    def is_connected(self) -> bool:
        return len(components(self._edge_adj, self.full_mask)) == 1

    def components(self) -> list[frozenset]:
        return [self.labels(c) for c in components(self._edge_adj, self.full_mask)]

    def faces(self, cid: int) -> list[tuple[int, int, int]]:
        """Codimension-one faces as ``(face id, coordinate, value)``."""
        arr = self._arrays[cid]
        d = len(arr).bit_length() - 1
        out = []
        for i in range(d):
            for e in (0, 1):
                fm = 0
                for v in face_array(arr, i, e):
                    fm |= 1 << v
                out.append((self._where[fm], i, e))
        return out

    def boundary_coefficients(self, cid: int) -> list[tuple[int, int]]:
        """Oriented boundary: ``sum_i (-1)^i ([x_i = 1] - [x_i = 0])``."""
        arr = self._arrays[cid]
        d = len(arr).bit_length() - 1
        out = []
        for i in range(d):
            for e in (0, 1):
                f = face_array(arr, i, e)
                fm = 0
                for v in f:
                    fm |= 1 << v
                fid = self._where[fm]
                sign = (-1) ** i * (1 if e else -1) * _orientation(f, self._arrays[fid])
                out.append((fid, sign))
        return out

    def cell_poset(self, budget: int = DEFAULT_CELL_BUDGET) -> CellPoset:
        if len(self._masks) > budget:
            raise BudgetExceeded(f"{len(self._masks)} cubes exceed the cell budget")
        faces = tuple(tuple(f for f, _, _ in self.faces(c)) for c in self.cube_ids())
        labels = tuple(tuple(self.vertices[v] for v in arr) for arr in self._arrays)
        dims = tuple(len(a).bit_length() - 1 for a in self._arrays)
        return CellPoset(labels, dims, faces)

    def subcomplex(self, cube_ids: Iterable[int]) -> "CubeComplex":
        """Cube complex generated by the given closed cubes."""
        ids = list(cube_ids)
        keep = 0
        for c in ids:
            keep |= self._masks[c]
        old = bit_list(keep)
        remap = {o: i for i, o in enumerate(old)}
        arrays = [tuple(remap[v] for v in self._arrays[c]) for c in ids]
        return CubeComplex._from_index_arrays([self.vertices[o] for o in old], arrays)

    def to_json(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "cubes": [self.cube(c).to_json() for c in self._maximal],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CubeComplex":
        return cls(data["vertices"], data.get("cubes", []))


def cycle_complex(k: int, prefix: str = "x", minimum: int = 5) -> CubeComplex:
    """k vertices and k edges in a cycle."""
    if k < minimum:
        raise PreconditionError(f"cycle length must be at least {minimum}")
    verts = [f"{prefix}{i}" for i in range(1, k + 1)]
    return CubeComplex(verts, [(1, (verts[i], verts[(i + 1) % k])) for i in range(k)])


def graph_complex(graph) -> CubeComplex:
    """A graph viewed as a one-dimensional cube complex."""
    return CubeComplex(graph.vertices, [(1, tuple(sorted(e))) for e in graph.edges])


def single_cube(d: int, prefix: str = "c") -> CubeComplex:
    verts = [f"{prefix}{b:0{d}b}" if d else f"{prefix}" for b in range(1 << d)]
    return CubeComplex(verts, [(d, verts)])


# ----------------------------------------------------------------------------


def cubical_distance(X: CubeComplex, v: str, w: str) -> int:
    a, b = X.index[v], X.index[w]
    if a == b:
        return 0
    seen = 1 << a
    frontier = seen
    dist = 0
    adj = X.cube_adjacency
    while frontier:
        dist += 1
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= adj[u]
        nxt &= ~seen
        if nxt >> b & 1:
            return dist
        seen |= nxt
        frontier = nxt
    raise DisconnectedError(
        f"{v!r} and {w!r} lie in different components", X.labels(seen)
    )


def distance_matrix(X: CubeComplex) -> list[list[int]]:
    """All-pairs cubical distances (-1 for unreachable)."""
    n = X.n
    adj = X.cube_adjacency
    out = []
    for a in range(n):
        row = [-1] * n
        row[a] = 0
        seen = 1 << a
        frontier = seen
        d = 0
        while frontier:
            d += 1
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= adj[u]
            nxt &= ~seen
            for u in iter_bits(nxt):
                row[u] = d
            seen |= nxt
            frontier = nxt
        out.append(row)
    return out


def containing_cubes(X: CubeComplex, S: Iterable[str]) -> list[int]:
    m = X.mask(S)
    if not m:
        raise PreconditionError("need a nonempty vertex set")
    start = X._vertex_cubes[lowest(m)]
    return [c for c in start if X.cube_mask(c) & m == m]


def minimal_cube(X: CubeComplex, S: Iterable[str]) -> Cube:
    """The unique inclusion-minimal cube containing S."""
    cands = containing_cubes(X, S)
    if not cands:
        raise HypothesisViolation(f"no common cube contains {sorted(S)}")
    masks = [X.cube_mask(c) for c in cands]
    minimal = [c for c, m in zip(cands, masks) if not any(o != m and o & m == o for o in masks)]
    if len(minimal) > 1:
        raise HypothesisViolation(
            "5-largeness violated: incomparable minimal cubes "
            + "; ".join(str(sorted(X.cube(c).vertices)) for c in minimal)
        )
    return X.cube(minimal[0])


def cube_link(X: CubeComplex, cube, label: Callable[[Cube], str] | None = None) -> SimplicialComplex:
    """Combinatorial link: vertices are codimension-one cofaces of the cube."""
    cid = X.cube_id(cube)
    base = X.cube_mask(cid)
    d = X.cube_dim(cid)
    anchor = lowest(base)
    cofaces = [c for c in X._vertex_cubes[anchor]
               if X.cube_dim(c) == d + 1 and X.cube_mask(c) & base == base]
    if label is None:
        def label(C: Cube) -> str:
            return "+".join(sorted(C.vertices - X.labels(base)))
    names = [label(X.cube(c)) for c in cofaces]
    if len(set(names)) != len(names):
        raise PreconditionError("link labels collide; pass an explicit labeler")
    coface_masks = [X.cube_mask(c) for c in cofaces]
    facets = []
    for c in X._vertex_cubes[anchor]:
        m = X.cube_mask(c)
        if m & base != base or X.cube_dim(c) <= d:
            continue
        f = 0
        for j, cm in enumerate(coface_masks):
            if cm & m == cm:
                f |= 1 << j
        facets.append(f)
    return SimplicialComplex(names, facets=facets)


def vertex_link(X: CubeComplex, v: str, label: Callable[[Cube], str] | None = None) -> SimplicialComplex:
    return cube_link(X, [v], label)


def check_no_isolated_corners(X: CubeComplex):
    """``(True, None)`` or ``(False, (cube, vertex))``."""
    adj = X.edge_adjacency
    for cid in X.cube_ids():
        m = X.cube_mask(cid)
        for v in iter_bits(m):
            if not adj[v] & ~m:
                return False, (X.cube(cid), X.vertices[v])
    return True, None


def check_no_disconnecting_cubes(X: CubeComplex):
    """``(True, None)`` or ``(False, cube)``: removing a closed cube must leave a
    nonempty connected complex."""
    if not X.is_connected():
        comp = X.components()[0]
        raise DisconnectedError("the complex is disconnected", comp)
    adj = X.edge_adjacency
    full = X.full_mask
    for cid in X.cube_ids():
        rest = full & ~X.cube_mask(cid)
        if not rest or component_of(adj, lowest(rest), rest) != rest:
            return False, X.cube(cid)
    return True, None


def neighborhood_cube_ids(X: CubeComplex, v: str, r: int) -> list[int]:
    """Cubes of the cubical r-neighborhood: iterate "all cubes meeting the current set"."""
    if r < 1:
        raise PreconditionError("radius must be positive")
    current = 1 << X.index[v]
    chosen: set[int] = set()
    for _ in range(r):
        chosen = set()
        for u in iter_bits(current):
            chosen.update(X._vertex_cubes[u])
        new = 0
        for c in chosen:
            new |= X.cube_mask(c)
        current = new
    return sorted(chosen)


def cubical_neighborhood(X: CubeComplex, v: str, r: int = 2) -> CubeComplex:
    return X.subcomplex(neighborhood_cube_ids(X, v, r))


@dataclass
class LargenessCertificate:
    locally_5_large: bool
    link_witness: tuple | None
    neighborhoods: dict = field(default_factory=dict)
    symmetry_note: str | None = None

    @property
    def certified(self) -> bool:
        return self.locally_5_large and bool(self.neighborhoods) and all(
            v == "contractible" for v in self.neighborhoods.values()
        )

    @property
    def status(self) -> str:
        if not self.locally_5_large or "non-contractible" in self.neighborhoods.values():
            return "refused"
        return "certified" if self.certified else "inconclusive"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "locally_5_large": self.locally_5_large,
            "link_witness": list(self.link_witness) if self.link_witness else None,
            "neighborhoods": dict(sorted(self.neighborhoods.items())),
            "symmetry_note": self.symmetry_note,
        }


def check_5_large(X: CubeComplex, vertices: Iterable[str] | None = None, restarts: int = 32,
                  seed: int = 0, symmetry_note: str | None = None) -> LargenessCertificate:
    """Links are checked at every vertex; 2-neighborhoods at ``vertices`` (default all).

    Passing a subset is only sound when an automorphism group acts transitively on
    the vertices; say so in ``symmetry_note``.
    """
    for v in X.vertices:
        ok, witness = is_k_large(vertex_link(X, v), 5)
        if not ok:
            return LargenessCertificate(False, (v,) + tuple(witness))
    verdicts = {}
    targets = list(X.vertices) if vertices is None else list(vertices)
    for v in targets:
        N = cubical_neighborhood(X, v, 2)
        rep = collapse(N, restarts=restarts, seed=seed)
        if rep.contractible:
            verdicts[v] = "contractible"
        else:
            # a failed collapse proves nothing; nonzero homology does
            from .homology import complex_homology

            nontrivial = not complex_homology(N, "GF2", reduced=True).is_trivial()
            verdicts[v] = "non-contractible" if nontrivial else "inconclusive"
    return LargenessCertificate(True, None, verdicts, symmetry_note)
