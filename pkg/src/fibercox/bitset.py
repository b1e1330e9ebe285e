"""Helpers for vertex sets encoded as Python int bitmasks."""

from __future__ import annotations

from typing import Iterator, Sequence


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def component_of(adj: Sequence[int], start: int, allowed: int) -> int:
    """Connected component of ``start`` in the subgraph induced on ``allowed``."""
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= adj[u]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def is_connected(adj: Sequence[int], allowed: int) -> bool:
    """True iff the induced subgraph on ``allowed`` is connected (empty counts as not)."""
    if not allowed:
        return False
    return component_of(adj, lowest(allowed), allowed) == allowed


def components(adj: Sequence[int], allowed: int) -> list[int]:
    out = []
    rest = allowed
    while rest:
        comp = component_of(adj, lowest(rest), allowed)
        out.append(comp)
        rest &= ~comp
    return out
