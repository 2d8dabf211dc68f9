"""Extremal lower-bound constructions and exact chromatic data.

The multipartite generators fix part order (large parts first, singleton
part last) so vertex indices are stable across runs.
"""
from __future__ import annotations

from typing import NamedTuple

from .graphs import MAX_ORDER, Graph, OrderTooLarge

EXACT_CHROMATIC_MAX_ORDER = 12


class InvalidParameters(ValueError):
    """Construction parameters outside the documented domain."""


class ParityError(InvalidParameters):
    """The parameter's parity does not match the requested construction."""


class OrderTooLargeForExact(ValueError):
    """Exact coloring search refuses graphs with more than 12 vertices."""


class ChromaticInfo(NamedTuple):
    chi: int
    surplus: int


def complete_multipartite(part_sizes: list[int]) -> Graph:
    """Complete multipartite graph; parts occupy consecutive index ranges."""
    if any(p < 0 for p in part_sizes):
        raise InvalidParameters("part sizes must be nonnegative")
    order = sum(part_sizes)
    if order > MAX_ORDER:
        raise OrderTooLarge(f"order {order} exceeds {MAX_ORDER}")
    rows = [0] * order
    full = (1 << order) - 1
    start = 0
    for size in part_sizes:
        part_mask = ((1 << size) - 1) << start
        other = full & ~part_mask
        for v in range(start, start + size):
            rows[v] = other
        start += size
    return Graph._from_rows(order, rows)


def burr_construction(chi: int, s: int, target_order: int) -> Graph:
    """Red graph witnessing the general lower bound: (chi-1) parts of size
    target_order-1 plus one part of size s-1 (possibly empty)."""
    if chi < 2 or s < 1 or target_order < s:
        raise InvalidParameters(
            f"need chi >= 2, s >= 1, target_order >= s; got {(chi, s, target_order)}"
        )
    parts = [target_order - 1] * (chi - 1)
    if s - 1 > 0:
        parts.append(s - 1)
    return complete_multipartite(parts)


def star_even_lower(n: int) -> Graph:
    """K_{n,n,1} on 2n+1 vertices, the even-star lower bound."""
    if n % 2 != 0:
        raise ParityError(f"n must be even, got {n}")
    if n < 2:
        raise InvalidParameters(f"n must be at least 2, got {n}")
    return burr_construction(3, 2, n + 1)


def star_odd_lower(n: int) -> Graph:
    """Join of two disjoint (n+1)/2-edge matchings, on 2n+2 vertices.

    Every vertex has degree n+2 and the complement is (n-1)-regular.
    """
    if n % 2 != 1:
        raise ParityError(f"n must be odd, got {n}")
    if n < 1:
        raise InvalidParameters(f"n must be positive, got {n}")
    ell = (n + 1) // 2
    side = 2 * ell
    order = 2 * side
    edges = [(2 * i, 2 * i + 1) for i in range(ell)]
    edges += [(side + 2 * i, side + 2 * i + 1) for i in range(ell)]
    edges += [(u, v) for u in range(side) for v in range(side, order)]
    return Graph.from_edges(order, edges)


def fan_lower(n: int) -> Graph:
    """K_{2n,2n,1} on 4n+1 vertices, the fan lower bound."""
    if n < 1:
        raise InvalidParameters(f"n must be at least 1, got {n}")
    return burr_construction(3, 2, 2 * n + 1)


def join(g: Graph, h: Graph) -> Graph:
    """Disjoint union plus all edges between the two vertex sets."""
    order = g.order + h.order
    if order > MAX_ORDER:
        raise OrderTooLarge(f"order {order} exceeds {MAX_ORDER}")
    shift = g.order
    gmask = (1 << shift) - 1
    hmask = ((1 << h.order) - 1) << shift
    rows = [r | hmask for r in g.rows]
    rows += [(r << shift) | gmask for r in h.rows]
    return Graph._from_rows(order, rows)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    order = g.order + h.order
    if order > MAX_ORDER:
        raise OrderTooLarge(f"order {order} exceeds {MAX_ORDER}")
    shift = g.order
    rows = list(g.rows) + [r << shift for r in h.rows]
    return Graph._from_rows(order, rows)


def _first_coloring(rows: tuple[int, ...], n: int, k: int) -> list[int] | None:
    # Backtracking with canonical color introduction: vertex v may use at
    # most one color beyond those already in use.
    colors = [-1] * n

    def place(v: int, used: int) -> bool:
        if v == n:
            return True
        limit = min(used + 1, k)
        for c in range(limit):
            ok = True
            m = rows[v]
            while m:
                b = m & -m
                u = b.bit_length() - 1
                m ^= b
                if u < v and colors[u] == c:
                    ok = False
                    break
            if ok:
                colors[v] = c
                if place(v + 1, max(used, c + 1)):
                    return True
        colors[v] = -1
        return False

    return colors[:] if place(0, 0) else None


def chromatic_info(g: Graph) -> ChromaticInfo:
    """Exact chromatic number and the minimum color-class size over all
    proper chi-colorings."""
    n = g.order
    if n > EXACT_CHROMATIC_MAX_ORDER:
        raise OrderTooLargeForExact(
            f"order {n} exceeds {EXACT_CHROMATIC_MAX_ORDER}"
        )
    if n == 0:
        return ChromaticInfo(0, 0)
    rows = g.rows
    chi = next(k for k in range(1, n + 1) if _first_coloring(rows, n, k))

    # Enumerate all proper chi-colorings up to color permutation; canonical
    # introduction order preserves the multiset of class sizes.
    best = n
    colors = [-1] * n
    counts = [0] * chi

    def walk(v: int, used: int) -> None:
        nonlocal best
        if v == n:
            if used == chi:
                smallest = min(counts[:chi])
                if smallest < best:
                    best = smallest
            return
        limit = min(used + 1, chi)
        for c in range(limit):
            m = rows[v]
            ok = True
            while m:
                b = m & -m
                u = b.bit_length() - 1
                m ^= b
                if u < v and colors[u] == c:
                    ok = False
                    break
            if ok:
                colors[v] = c
                counts[c] += 1
                walk(v + 1, max(used, c + 1))
                counts[c] -= 1
        colors[v] = -1

    walk(0, 0)
    return ChromaticInfo(chi, best)
