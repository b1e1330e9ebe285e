"""Greedy elementary collapses as a sound (incomplete) contractibility test."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .bitset import bit_list, popcount
from .complexes import DEFAULT_CELL_BUDGET, SimplicialComplex


@dataclass(frozen=True)
class CellPoset:
    """Closed cell complex given by its cells and codimension-one face lists."""

    labels: tuple
    dims: tuple[int, ...]
    faces: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.labels)


def simplicial_poset(K: SimplicialComplex, budget: int = DEFAULT_CELL_BUDGET) -> CellPoset:
    masks = K.simplex_masks(budget)
    where = {m: i for i, m in enumerate(masks)}
    faces = []
    for m in masks:
        if popcount(m) == 1:
            faces.append(())
        else:
            faces.append(tuple(where[m & ~(1 << v)] for v in bit_list(m)))
    labels = tuple(K.ordered(m) for m in masks)
    return CellPoset(labels, tuple(popcount(m) - 1 for m in masks), tuple(faces))


def as_poset(K, budget: int = DEFAULT_CELL_BUDGET) -> CellPoset:
    if isinstance(K, CellPoset):
        return K
    if isinstance(K, SimplicialComplex):
        return simplicial_poset(K, budget)
    return K.cell_poset(budget)


@dataclass
class CollapseReport:
    collapsible: str  # "yes" | "inconclusive"
    residual: tuple = ()
    log: list = field(default_factory=list)
    attempts: int = 0
    seed: int = 0

    @property
    def contractible(self) -> bool:
        return self.collapsible == "yes"

    def to_json(self) -> dict:
        return {
            "collapsible": self.collapsible,
            "residual_cells": len(self.residual),
            "collapses": len(self.log),
            "attempts": self.attempts,
            "seed": self.seed,
        }


def _attempt(P: CellPoset, cofaces: Sequence[Sequence[int]], rng: random.Random | None):
    n = len(P)
    alive = [True] * n
    count = [len(c) for c in cofaces]
    pending = [i for i in range(n) if count[i] == 1]
    if rng is not None:
        rng.shuffle(pending)
    log = []
    remaining = n
    while pending:
        if rng is not None:
            j = rng.randrange(len(pending))
            pending[j], pending[-1] = pending[-1], pending[j]
        f = pending.pop()
        if not alive[f] or count[f] != 1:
            continue
        c = next(x for x in cofaces[f] if alive[x])
        alive[f] = alive[c] = False
        remaining -= 2
        log.append((f, c))
        for g in P.faces[c]:
            if alive[g]:
                count[g] -= 1
                if count[g] == 1:
                    pending.append(g)
        for g in P.faces[f]:
            if alive[g]:
                count[g] -= 1
                if count[g] == 1:
                    pending.append(g)
    residual = [i for i in range(n) if alive[i]]
    return residual, log


def collapse(K, restarts: int = 32, seed: int = 0, budget: int = DEFAULT_CELL_BUDGET) -> CollapseReport:
    """Try to collapse K to a point; "yes" certifies contractibility."""
    P = as_poset(K, budget)
    if len(P) == 0:
        return CollapseReport("inconclusive", (), [], 0, seed)
    cofaces: list[list[int]] = [[] for _ in range(len(P))]
    for c, fs in enumerate(P.faces):
        for f in fs:
            cofaces[f].append(c)
    rng = random.Random(seed)
    best = None
    for attempt in range(max(1, restarts)):
        residual, log = _attempt(P, cofaces, None if attempt == 0 else rng)
        if len(residual) == 1:
            res = tuple(P.labels[i] for i in residual)
            named = [(P.labels[f], P.labels[c]) for f, c in log]
            return CollapseReport("yes", res, named, attempt + 1, seed)
        if best is None or len(residual) < len(best[0]):
            best = (residual, log)
    residual, log = best
    return CollapseReport(
        "inconclusive",
        tuple(P.labels[i] for i in residual),
        [(P.labels[f], P.labels[c]) for f, c in log],
        max(1, restarts),
        seed,
    )
