"""Z/2 states on graphs, systems of moves, legal orbits, and the detection data used
to certify legality of the canonical system on a pair thickening."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .bitset import bit_list, component_of, is_connected, iter_bits, lowest, popcount
from .complexes import Graph
from .cubical import (
    CubeComplex,
    LargenessCertificate,
    check_5_large,
    check_no_disconnecting_cubes,
    check_no_isolated_corners,
    minimal_cube,
)
from .errors import BudgetExceeded, DisconnectedError, HypothesisViolation, PreconditionError
from .linalg import GF2Basis
from .thickening import Thickening, split_pair

DEFAULT_ORBIT_BUDGET = 1 << 20


@dataclass(frozen=True)
class State:
    """Bit i is the value at vertex i of the reference order."""

    bits: int
    n: int

    def __post_init__(self):
        if self.bits >> self.n:
            raise PreconditionError("state has bits beyond its length")

    def __getitem__(self, i: int) -> int:
        return self.bits >> i & 1

    def __add__(self, other: "State") -> "State":
        if other.n != self.n:
            raise PreconditionError("states of different length")
        return State(self.bits ^ other.bits, self.n)

    def ones(self) -> int:
        return self.bits

    def zeros(self) -> int:
        return ((1 << self.n) - 1) & ~self.bits

    def side(self, eps: int) -> int:
        return self.ones() if eps else self.zeros()

    def values(self) -> list[int]:
        return [self[i] for i in range(self.n)]

    @classmethod
    def from_values(cls, values: Sequence[int]) -> "State":
        b = 0
        for i, x in enumerate(values):
            if x & 1:
                b |= 1 << i
        return cls(b, len(values))

    @classmethod
    def zero(cls, n: int) -> "State":
        return cls(0, n)

    def to_json(self) -> str:
        return "".join(str(x) for x in self.values())


def _graph_adj(G) -> tuple:
    if isinstance(G, Graph):
        return G.adj
    return G.adjacency


def _graph_vertices(G) -> tuple:
    return G.vertices


def is_legal_state(G, phi: State):
    """``(True, None)`` or ``(False, witness)``: both value classes must be
    nonempty and induce connected subgraphs."""
    adj = _graph_adj(G)
    verts = _graph_vertices(G)
    if phi.n != len(verts):
        raise PreconditionError("state length does not match the graph")
    for eps in (0, 1):
        side = phi.side(eps)
        if not side:
            return False, {"value": eps, "reason": "empty"}
        comp = component_of(adj, lowest(side), side)
        if comp != side:
            return False, {
                "value": eps,
                "reason": "disconnected",
                "component": sorted(verts[i] for i in iter_bits(comp)),
            }
    return True, None


def _legal_mask(adj: Sequence[int], bits: int, full: int) -> bool:
    zeros = full & ~bits
    return bool(bits) and bool(zeros) and is_connected(adj, bits) and is_connected(adj, zeros)


def is_move(G, v: str, m: State) -> bool:
    verts = _graph_vertices(G)
    try:
        i = verts.index(v)
    except ValueError:
        raise PreconditionError(f"unknown vertex {v!r}") from None
    return m[i] == 1 and not (m.bits & _graph_adj(G)[i])


@dataclass
class MoveSystem:
    """One move per vertex (index-aligned with the graph's vertex order)."""

    graph: object
    moves: tuple
    note: str | None = None

    def __post_init__(self):
        verts = _graph_vertices(self.graph)
        if len(self.moves) != len(verts):
            raise PreconditionError("a system of moves needs exactly one move per vertex")
        for v, m in zip(verts, self.moves):
            if not is_move(self.graph, v, m):
                raise PreconditionError(f"the move assigned to {v!r} is not a move at {v!r}")
        self._basis = None

    @property
    def n(self) -> int:
        return len(self.moves)

    def basis(self) -> list[State]:
        if self._basis is None:
            b = GF2Basis(m.bits for m in self.moves)
            self._basis = [State(v, self.n) for _, v in sorted(b.pivots.items(), reverse=True)]
        return self._basis

    @property
    def rank(self) -> int:
        return len(self.basis())


def move_group_basis(system: MoveSystem) -> tuple[list[State], int]:
    b = system.basis()
    return b, len(b)


# ----------------------------------------------------------------------------
# canonical data on a pair thickening


def _pair_indices(Th: Thickening) -> list[tuple[int, int]]:
    X = Th.base
    out = []
    for y in Th.vertices:
        v, w = split_pair(y)
        out.append((X.index[v], X.index[w]))
    return out


def canonical_state(Th: Thickening, indexing: Sequence[str] | None = None) -> State:
    """Value 1 at "v|w" exactly when v precedes w in the reference order."""
    order = list(indexing) if indexing is not None else list(Th.base.vertices)
    pos = {v: i for i, v in enumerate(order)}
    b = 0
    for i, y in enumerate(Th.vertices):
        v, w = split_pair(y)
        if pos[v] < pos[w]:
            b |= 1 << i
    return State(b, Th.n)


def pair_toggle(Th: Thickening, v: str, w: str) -> State:
    K = Th.complex
    return State((1 << K.index[f"{v}|{w}"]) | (1 << K.index[f"{w}|{v}"]), Th.n)


def canonical_moves(Th: Thickening) -> MoveSystem:
    """Each "v|w" gets the toggle of the unordered pair {v, w}; "w|v" gets the same move."""
    moves = []
    for y in Th.vertices:
        v, w = split_pair(y)
        moves.append(pair_toggle(Th, v, w))
    return MoveSystem(Th.complex.graph(), tuple(moves),
                      note="one toggle per unordered pair, assigned to both ordered pairs")


# ----------------------------------------------------------------------------
# orbits


@dataclass
class LegalityReport:
    mode: str
    rank: int
    orbit: int
    verdict: str
    witnesses: list = field(default_factory=list)
    seed: int | None = None
    checked: int = 0
    illegal: int = 0
    notes: list = field(default_factory=list)

    @property
    def authoritative(self) -> bool:
        return self.mode == "exhaustive"

    @property
    def legal(self) -> bool:
        return self.illegal == 0

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "rank": self.rank,
            "orbit": self.orbit,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "seed": self.seed,
            "checked": self.checked,
            "illegal": self.illegal,
            "notes": self.notes,
        }


def _gray_states(start: int, basis: Sequence[int]):
    cur = start
    yield cur
    for k in range(1, 1 << len(basis)):
        j = (k & -k).bit_length() - 1
        cur ^= basis[j]
        yield cur


def check_legal_orbit(G, system: MoveSystem, S: State, mode: str = "auto", samples: int = 10_000,
                      orbit_budget: int = DEFAULT_ORBIT_BUDGET, seed: int = 0,
                      max_witnesses: int = 5) -> LegalityReport:
    """Check every state of M.S (exhaustive) or ``samples`` uniform draws from it."""
    basis = [b.bits for b in system.basis()]
    r = len(basis)
    adj = _graph_adj(G)
    verts = _graph_vertices(G)
    full = (1 << len(verts)) - 1
    if mode == "auto":
        mode = "exhaustive" if (1 << r) <= orbit_budget else "sampled"
    witnesses = []
    illegal = 0
    if mode == "exhaustive":
        if (1 << r) > orbit_budget:
            raise BudgetExceeded(f"orbit of size 2^{r} exceeds the budget of {orbit_budget}")
        checked = 0
        for bits in _gray_states(S.bits, basis):
            checked += 1
            if not _legal_mask(adj, bits, full):
                illegal += 1
                if len(witnesses) < max_witnesses:
                    witnesses.append(_witness(G, State(bits, S.n)))
        verdict = "legal" if not illegal else "illegal"
        return LegalityReport("exhaustive", r, 1 << r, verdict, witnesses, None, checked, illegal)
    if mode != "sampled":
        raise PreconditionError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    for _ in range(samples):
        pick = rng.getrandbits(r) if r else 0
        bits = S.bits
        for j in iter_bits(pick):
            bits ^= basis[j]
        if not _legal_mask(adj, bits, full):
            illegal += 1
            if len(witnesses) < max_witnesses:
                witnesses.append(_witness(G, State(bits, S.n)))
    verdict = f"no counterexample in {samples} draws" if not illegal else "illegal"
    return LegalityReport("sampled", r, samples, verdict, witnesses, seed, samples, illegal)


def _witness(G, phi: State) -> dict:
    ok, why = is_legal_state(G, phi)
    return {"state": phi.to_json(), **(why or {})}


# ----------------------------------------------------------------------------
# detection functions and blockade cubes


@dataclass
class DetectionTable:
    eps: int
    table: dict

    def n_set(self) -> list[str]:
        return [v for v, x in self.table.items() if x == "N"]

    def y_set(self) -> list[str]:
        return [v for v, x in self.table.items() if x == "Y"]


def detection_function(Th: Thickening, state: State, eps: int) -> DetectionTable:
    """Y at v iff some vertex over v carries the value ``eps``."""
    table = {v: "N" for v in Th.base.vertices}
    for i, y in enumerate(Th.vertices):
        if state[i] == eps:
            table[Th.alpha(y)] = "Y"
    return DetectionTable(eps, table)


def detection_masks(Th: Thickening, state: State) -> tuple[int, int]:
    """Base-vertex masks (Y-set for value 0, Y-set for value 1)."""
    X = Th.base
    out = [0, 0]
    for i, y in enumerate(Th.vertices):
        out[state[i]] |= 1 << X.index[Th.alpha(y)]
    return out[0], out[1]


def fiber_legal(X: CubeComplex, y0: int, y1: int) -> bool:
    """Legality on a thickening, read off the base: both detection Y-sets must be
    nonempty and connected under the common-cube relation."""
    adj = X.cube_adjacency
    return bool(y0) and bool(y1) and is_connected(adj, y0) and is_connected(adj, y1)


@dataclass
class Blockade:
    cube: object
    n_set: list
    vacuous: bool
    covered: bool

    def to_json(self) -> dict:
        return {
            "cube": sorted(self.cube.vertices),
            "n_set": self.n_set,
            "vacuous": self.vacuous,
            "outside_all_Y": self.covered,
        }


def blockade_cube(X: CubeComplex, Th: Thickening, state: State, eps: int) -> Blockade:
    """A cube holding every base vertex whose fiber misses ``eps``."""
    table = detection_function(Th, state, eps)
    ns = table.n_set()
    if not ns:
        return Blockade(minimal_cube(X, [X.vertices[0]]), [], True, True)
    near = X.cube_adjacency
    for a in ns:
        for b in ns:
            if a != b and not near[X.index[a]] >> X.index[b] & 1:
                raise HypothesisViolation(
                    f"hypothesis violation: {a!r} and {b!r} both miss value {eps} but share no cube"
                )
    cube = minimal_cube(X, ns)
    covered = all(table.table[v] == "Y" for v in X.vertices if v not in cube.vertices)
    if not covered:
        raise HypothesisViolation("hypothesis violation: a vertex outside the blockade cube misses the value")
    return Blockade(cube, ns, False, covered)


# ----------------------------------------------------------------------------
# certificate from the hypotheses on the base


@dataclass
class Certificate:
    granted: bool
    checks: dict
    witness: object = None
    reason: str | None = None
    reading: str = "moves: the toggle of {v, w} is assigned to both v|w and w|v"

    def to_json(self) -> dict:
        return {
            "granted": self.granted,
            "checks": self.checks,
            "witness": self.witness,
            "reason": self.reason,
            "reading": self.reading,
        }


def certify_legal_by_hypotheses(X: CubeComplex, largeness: LargenessCertificate | None = None,
                                restarts: int = 32, seed: int = 0) -> Certificate:
    """Grant legality of the canonical system on the pair thickening of X when X is
    certified 5-large, has no disconnecting cubes and no isolated corners."""
    checks: dict = {}
    cert = largeness if largeness is not None else check_5_large(X, restarts=restarts, seed=seed)
    checks["five_large"] = cert.to_json()
    corners_ok, corner = check_no_isolated_corners(X)
    checks["no_isolated_corners"] = corners_ok
    try:
        disc_ok, disc = check_no_disconnecting_cubes(X)
    except DisconnectedError as exc:
        disc_ok, disc = False, None
        checks["disconnected"] = sorted(exc.component)
    checks["no_disconnecting_cubes"] = disc_ok
    if cert.status != "certified":
        if cert.link_witness:
            witness = list(cert.link_witness)
        else:
            witness = {v: s for v, s in sorted(cert.neighborhoods.items()) if s != "contractible"}
        return Certificate(False, checks, witness, f"5-largeness {cert.status}")
    if not corners_ok:
        cube, v = corner
        return Certificate(False, checks, {"cube": sorted(cube.vertices), "corner": v}, "isolated corner")
    if not disc_ok:
        w = sorted(disc.vertices) if disc is not None else checks.get("disconnected")
        return Certificate(False, checks, w, "disconnecting cube")
    return Certificate(True, checks)
