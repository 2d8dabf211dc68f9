"""Immutable simple graphs on vertices 0..order-1, backed by integer bitsets.

Each adjacency row is a Python int whose bit ``v`` marks a neighbor. Vertex
sets throughout the package are plain ints used the same way; ``bit_list``
and ``mask_of`` convert between masks and ascending vertex lists.
"""
from __future__ import annotations

import base64
from typing import Iterable, Iterator, Sequence

MAX_ORDER = 1024


class GraphError(ValueError):
    """Base class for graph construction and codec failures."""


class EndpointOutOfRange(GraphError):
    """An edge endpoint is negative or at least the graph order."""


class LoopEdge(GraphError):
    """Self-loops cannot be represented."""


class OrderTooLarge(GraphError):
    """Requested order exceeds MAX_ORDER."""


class MalformedGraph6(GraphError):
    """Input is not a canonical graph6 encoding of a simple graph."""


def bit_list(mask: int) -> list[int]:
    """Ascending list of set bit positions."""
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def bits(mask: int) -> Iterator[int]:
    """Iterate set bit positions in ascending order."""
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Undirected simple graph. Instances are immutable and hashable."""

    __slots__ = ("order", "_rows", "_hash")

    def __init__(self, order: int, rows: Sequence[int], _trusted: bool = False):
        if not _trusted:
            if order < 0 or order > MAX_ORDER:
                raise OrderTooLarge(f"order {order} outside 0..{MAX_ORDER}")
            if len(rows) != order:
                raise GraphError("row count does not match order")
            full = (1 << order) - 1
            for v, row in enumerate(rows):
                if row & ~full:
                    raise EndpointOutOfRange(f"row {v} has bits beyond order")
                if row >> v & 1:
                    raise LoopEdge(f"vertex {v} adjacent to itself")
            for v, row in enumerate(rows):
                m = row
                while m:
                    b = m & -m
                    u = b.bit_length() - 1
                    m ^= b
                    if not rows[u] >> v & 1:
                        raise GraphError(f"adjacency not symmetric at ({v}, {u})")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_rows", tuple(rows))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if order < 0 or order > MAX_ORDER:
            raise OrderTooLarge(f"order {order} outside 0..{MAX_ORDER}")
        rows = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise EndpointOutOfRange(f"edge ({u}, {v}) outside 0..{order - 1}")
            if u == v:
                raise LoopEdge(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(order, rows, _trusted=True)

    @classmethod
    def _from_rows(cls, order: int, rows: Sequence[int]) -> "Graph":
        # Trusted fast path for internal callers that already hold valid rows.
        return cls(order, rows, _trusted=True)

    # -- basic queries ----------------------------------------------------

    def row(self, v: int) -> int:
        return self._rows[v]

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bit_list(self._rows[v])

    def degree(self, v: int) -> int:
        return self._rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self._rows]

    def min_degree(self) -> int:
        return min(self.degrees()) if self.order else 0

    def max_degree(self) -> int:
        return max(self.degrees()) if self.order else 0

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self._rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        """All edges (u, v) with u < v, lexicographically sorted."""
        out = []
        for u in range(self.order):
            m = self._rows[u] >> (u + 1) << (u + 1)
            while m:
                b = m & -m
                out.append((u, b.bit_length() - 1))
                m ^= b
        return out

    def full_mask(self) -> int:
        return (1 << self.order) - 1

    # -- derived graphs ---------------------------------------------------

    def complement(self) -> "Graph":
        full = (1 << self.order) - 1
        rows = [full & ~r & ~(1 << v) for v, r in enumerate(self._rows)]
        return Graph._from_rows(self.order, rows)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph plus the mapping from new index to old vertex."""
        members = sorted(set(vertices))
        for v in members:
            if not 0 <= v < self.order:
                raise EndpointOutOfRange(f"vertex {v} outside 0..{self.order - 1}")
        pos = {v: i for i, v in enumerate(members)}
        mask = mask_of(members)
        rows = []
        for v in members:
            m = self._rows[v] & mask
            r = 0
            while m:
                b = m & -m
                r |= 1 << pos[b.bit_length() - 1]
                m ^= b
            rows.append(r)
        return Graph._from_rows(len(members), rows), tuple(members)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image under vertex permutation: new vertex perm[v] plays old v."""
        n = self.order
        if sorted(perm) != list(range(n)):
            raise GraphError("not a permutation of the vertex range")
        rows = [0] * n
        for v in range(n):
            m = self._rows[v]
            r = 0
            while m:
                b = m & -m
                r |= 1 << perm[b.bit_length() - 1]
                m ^= b
            rows[perm[v]] = r
        return Graph._from_rows(n, rows)

    # -- dunder plumbing ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.order == other.order and self._rows == other._rows

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.order, self._rows))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, edges={self.edge_count()})"


# -- graph6 codec ----------------------------------------------------------
#
# Canonical graph6 only: no sparse6, no digraph6, no ">>graph6<<" header.
# The bit stream packs the upper triangle column by column; data bytes are
# regrouped through base64 so the hot path stays in C.

_B64_ALPHABET = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/"
_B64_TO_G6 = bytes.maketrans(_B64_ALPHABET, bytes(range(63, 127)))
_G6_TO_B64 = bytes.maketrans(bytes(range(63, 127)), _B64_ALPHABET)


def _encode_order(n: int) -> str:
    if n <= 62:
        return chr(63 + n)
    return "~" + "".join(chr(63 + (n >> k & 63)) for k in (12, 6, 0))


def to_graph6(g: Graph) -> str:
    n = g.order
    rows = g.rows
    parts = []
    for j in range(1, n):
        v = rows[j] & ((1 << j) - 1)
        # stream wants row index ascending, format() emits high bit first
        parts.append(format(v, f"0{j}b")[::-1])
    stream = "".join(parts)
    m = len(stream)
    if m == 0:
        return _encode_order(n)
    sextets = (m + 5) // 6
    padded = stream + "0" * (-m % 24)
    raw = int(padded, 2).to_bytes(len(padded) // 8, "big")
    data = base64.b64encode(raw).translate(_B64_TO_G6)[:sextets]
    return _encode_order(n) + data.decode("ascii")


def from_graph6(text: str) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    s = text
    if s.endswith("\n"):
        s = s[:-1]
        if s.endswith("\r"):
            s = s[:-1]
    if not s:
        raise MalformedGraph6("empty input")
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise MalformedGraph6(f"byte {ord(ch)} outside graph6 range")
    if s[0] != "~":
        n = ord(s[0]) - 63
        idx = 1
    elif len(s) >= 2 and s[1] != "~":
        if len(s) < 4:
            raise MalformedGraph6("truncated long-form order")
        n = 0
        for ch in s[1:4]:
            n = n << 6 | (ord(ch) - 63)
        if n <= 62:
            raise MalformedGraph6("non-canonical long-form order")
        idx = 4
    else:
        # 8-byte order form encodes n >= 258048, far beyond MAX_ORDER
        raise OrderTooLarge("order exceeds MAX_ORDER")
    if n > MAX_ORDER:
        raise OrderTooLarge(f"order {n} exceeds {MAX_ORDER}")
    m = n * (n - 1) // 2
    sextets = (m + 5) // 6
    data = s[idx:]
    if len(data) != sextets:
        raise MalformedGraph6(
            f"expected {sextets} data characters for order {n}, got {len(data)}"
        )
    if m == 0:
        return Graph._from_rows(n, [0] * n)
    b64 = data.encode("ascii").translate(_G6_TO_B64)
    raw = base64.b64decode(b64 + b"A" * (-sextets % 4))
    stream = format(int.from_bytes(raw, "big"), f"0{len(raw) * 8}b")
    if "1" in stream[m : sextets * 6]:
        raise MalformedGraph6("nonzero padding bits")
    rows = [0] * n
    pos = 0
    for j in range(1, n):
        seg = stream[pos : pos + j]
        pos += j
        v = int(seg[::-1], 2)
        if v:
            rows[j] |= v
            bitj = 1 << j
            while v:
                b = v & -v
                rows[b.bit_length() - 1] |= bitj
                v ^= b
    return Graph._from_rows(n, rows)
