"""Fixed-pattern detectors: triangle, K4, K5-e, W4, the Hajos graph, and
blue stars / blue fans in the complement.

All detectors use subgraph (not induced-subgraph) semantics and return the
lexicographically least witness under ascending-index scans.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, ClassVar, Union

from .graphs import Graph, bit_list
from . import matching as _matching


def hajos_graph() -> Graph:
    """The canonical 6-vertex pattern: triangle 0,1,2 plus one apex per edge.

    Vertex 3 covers edge (0,1), vertex 4 covers (0,2), vertex 5 covers (1,2).
    """
    return Graph.from_edges(
        6,
        [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (2, 4), (1, 5), (2, 5)],
    )


# -- embeddings and witnesses ------------------------------------------------


@dataclass(frozen=True)
class HajosEmbedding:
    """Six vertices: a triangle plus one apex per triangle edge.

    apexes[0] covers (triangle[0], triangle[1]), apexes[1] covers
    (triangle[0], triangle[2]), apexes[2] covers (triangle[1], triangle[2]).
    """

    triangle: tuple[int, int, int]
    apexes: tuple[int, int, int]

    def vertices(self) -> tuple[int, ...]:
        return (*self.triangle, *self.apexes)

    def required_edges(self) -> list[tuple[int, int]]:
        t0, t1, t2 = self.triangle
        a01, a02, a12 = self.apexes
        return [
            (t0, t1),
            (t0, t2),
            (t1, t2),
            (a01, t0),
            (a01, t1),
            (a02, t0),
            (a02, t2),
            (a12, t1),
            (a12, t2),
        ]


@dataclass(frozen=True)
class W4Embedding:
    """Wheel on five vertices: hub adjacent to a 4-cycle given in cyclic order."""

    hub: int
    rim: tuple[int, int, int, int]

    def required_edges(self) -> list[tuple[int, int]]:
        r0, r1, r2, r3 = self.rim
        return [
            (self.hub, r0),
            (self.hub, r1),
            (self.hub, r2),
            (self.hub, r3),
            (r0, r1),
            (r1, r2),
            (r2, r3),
            (r3, r0),
        ]


@dataclass(frozen=True)
class RedHajos:
    kind: ClassVar[str] = "red_hajos"
    embedding: HajosEmbedding

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "vertices": {
                "triangle": list(self.embedding.triangle),
                "apexes": list(self.embedding.apexes),
            },
        }


@dataclass(frozen=True)
class BlueStar:
    kind: ClassVar[str] = "blue_star"
    center: int
    leaves: tuple[int, ...]

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "vertices": {"center": self.center, "leaves": list(self.leaves)},
        }


@dataclass(frozen=True)
class BlueFan:
    kind: ClassVar[str] = "blue_fan"
    center: int
    blades: tuple[tuple[int, int], ...]

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "vertices": {
                "center": self.center,
                "blades": [list(b) for b in self.blades],
            },
        }


Witness = Union[RedHajos, BlueStar, BlueFan]


def witness_from_json(obj: dict[str, Any]) -> Witness:
    kind = obj.get("kind")
    vertices = obj.get("vertices", {})
    if kind == "red_hajos":
        return RedHajos(
            HajosEmbedding(
                tuple(vertices["triangle"]), tuple(vertices["apexes"])
            )
        )
    if kind == "blue_star":
        return BlueStar(vertices["center"], tuple(vertices["leaves"]))
    if kind == "blue_fan":
        return BlueFan(
            vertices["center"], tuple(tuple(b) for b in vertices["blades"])
        )
    raise ValueError(f"unknown witness kind: {kind!r}")


# -- red-side detectors ------------------------------------------------------


def find_triangle(g: Graph) -> tuple[int, int, int] | None:
    n = g.order
    rows = g.rows
    for a in range(n):
        ra = rows[a]
        mb = ra >> (a + 1) << (a + 1)
        while mb:
            bb = mb & -mb
            b = bb.bit_length() - 1
            mb ^= bb
            mc = ra & rows[b] >> (b + 1) << (b + 1)
            if mc:
                c = (mc & -mc).bit_length() - 1
                return (a, b, c)
    return None


def find_k4(g: Graph) -> tuple[int, int, int, int] | None:
    n = g.order
    rows = g.rows
    for a in range(n):
        ra = rows[a]
        mb = ra >> (a + 1) << (a + 1)
        while mb:
            bb = mb & -mb
            b = bb.bit_length() - 1
            mb ^= bb
            mab = ra & rows[b]
            mc = mab >> (b + 1) << (b + 1)
            while mc:
                bc = mc & -mc
                c = bc.bit_length() - 1
                mc ^= bc
                md = mab & rows[c] >> (c + 1) << (c + 1)
                if md:
                    d = (md & -md).bit_length() - 1
                    return (a, b, c, d)
    return None


def find_k5_minus_e(g: Graph) -> tuple[tuple[int, int, int, int], int] | None:
    """A 4-clique plus a fifth vertex adjacent to at least three of it."""
    n = g.order
    rows = g.rows
    for a in range(n):
        ra = rows[a]
        mb = ra >> (a + 1) << (a + 1)
        while mb:
            bb = mb & -mb
            b = bb.bit_length() - 1
            mb ^= bb
            mab = ra & rows[b]
            mc = mab >> (b + 1) << (b + 1)
            while mc:
                bc = mc & -mc
                c = bc.bit_length() - 1
                mc ^= bc
                mabc = mab & rows[c]
                md = mabc >> (c + 1) << (c + 1)
                while md:
                    bd = md & -md
                    d = bd.bit_length() - 1
                    md ^= bd
                    quad_mask = (1 << a) | (1 << b) | (1 << c) | (1 << d)
                    for e in range(n):
                        if quad_mask >> e & 1:
                            continue
                        if (rows[e] & quad_mask).bit_count() >= 3:
                            return (a, b, c, d), e
    return None


def find_w4(g: Graph) -> W4Embedding | None:
    """Hub plus a 4-cycle in its neighborhood.

    For each hub and each pair (x, y) of hub neighbors, two common neighbors
    of x and y inside the hub's neighborhood close the rim x-p-y-q.
    """
    n = g.order
    rows = g.rows
    for h in range(n):
        nb = rows[h]
        if nb.bit_count() < 4:
            continue
        xs = bit_list(nb)
        for i, x in enumerate(xs):
            rx = rows[x]
            for y in xs[i + 1 :]:
                common = rx & rows[y] & nb
                if common.bit_count() >= 2:
                    b = common & -common
                    p = b.bit_length() - 1
                    q = ((common ^ b) & -(common ^ b)).bit_length() - 1
                    return W4Embedding(hub=h, rim=(x, p, y, q))
    return None


def _sdr3(s_ab: int, s_ac: int, s_bc: int) -> tuple[int, int, int] | None:
    """Distinct representatives for three candidate bitsets, if any exist.

    Hall's condition on three sets reduces to the seven nonemptiness and
    union-size checks below; once it holds, a representative triple is found
    by an ascending scan with one lookahead.
    """
    if not (s_ab and s_ac and s_bc):
        return None
    if (
        (s_ab | s_ac).bit_count() < 2
        or (s_ab | s_bc).bit_count() < 2
        or (s_ac | s_bc).bit_count() < 2
    ):
        return None
    if (s_ab | s_ac | s_bc).bit_count() < 3:
        return None
    m1 = s_ab
    while m1:
        b1 = m1 & -m1
        a = b1.bit_length() - 1
        m1 ^= b1
        rest_ac = s_ac & ~b1
        rest_bc = s_bc & ~b1
        if not rest_ac or not rest_bc:
            continue
        if (rest_ac | rest_bc).bit_count() < 2:
            continue
        m2 = rest_ac
        while m2:
            b2 = m2 & -m2
            c1 = b2.bit_length() - 1
            m2 ^= b2
            final = rest_bc & ~b2
            if final:
                return (a, c1, (final & -final).bit_length() - 1)
    return None


def find_hajos(g: Graph) -> HajosEmbedding | None:
    """Search all triangles; for each, seek distinct apexes over its edges."""
    n = g.order
    rows = g.rows
    for a in range(n):
        ra = rows[a]
        mb = ra >> (a + 1) << (a + 1)
        while mb:
            bb = mb & -mb
            b = bb.bit_length() - 1
            mb ^= bb
            rab = ra & rows[b]
            mc = rab >> (b + 1) << (b + 1)
            while mc:
                bc = mc & -mc
                c = bc.bit_length() - 1
                mc ^= bc
                tri_mask = (1 << a) | (1 << b) | (1 << c)
                rc = rows[c]
                s_ab = rab & ~tri_mask
                s_ac = ra & rc & ~tri_mask
                s_bc = rows[b] & rc & ~tri_mask
                reps = _sdr3(s_ab, s_ac, s_bc)
                if reps is not None:
                    return HajosEmbedding(triangle=(a, b, c), apexes=reps)
    return None


# -- blue-side detectors -----------------------------------------------------


def find_blue_star(g: Graph, n: int) -> BlueStar | None:
    """First vertex whose complement degree reaches n, with its lowest leaves."""
    if n < 1:
        raise ValueError("star size must be at least 1")
    order = g.order
    full = (1 << order) - 1
    rows = g.rows
    for v in range(order):
        crow = full & ~rows[v] & ~(1 << v)
        if crow.bit_count() >= n:
            leaves = []
            m = crow
            while len(leaves) < n:
                b = m & -m
                leaves.append(b.bit_length() - 1)
                m ^= b
            return BlueStar(center=v, leaves=tuple(leaves))
    return None


def _complement_local(g: Graph, mask: int) -> tuple[Graph, list[int]]:
    # Induced subgraph of the complement on the vertices of mask.
    members = bit_list(mask)
    pos = {v: i for i, v in enumerate(members)}
    full = (1 << g.order) - 1
    rows = g.rows
    local = []
    for v in members:
        m = (full & ~rows[v] & ~(1 << v)) & mask
        r = 0
        while m:
            b = m & -m
            r |= 1 << pos[b.bit_length() - 1]
            m ^= b
        local.append(r)
    return Graph._from_rows(len(members), local), members


def find_blue_fan(g: Graph, n: int) -> BlueFan | None:
    """First center whose complement neighborhood holds n disjoint blue edges.

    Centers with complement degree below 2n cannot work and are skipped
    before the matching runs.
    """
    if n < 1:
        raise ValueError("fan size must be at least 1")
    order = g.order
    full = (1 << order) - 1
    rows = g.rows
    for v in range(order):
        crow = full & ~rows[v] & ~(1 << v)
        if crow.bit_count() < 2 * n:
            continue
        local, members = _complement_local(g, crow)
        m = _matching.maximum_matching(local)
        if len(m) >= n:
            blades = tuple(
                (members[x], members[y]) for x, y in m[:n]
            )
            return BlueFan(center=v, blades=blades)
    return None


# -- witness validation ------------------------------------------------------


def verify_witness(g: Graph, w: Witness, n: int | None = None) -> bool:
    """Structural check of a witness against g.

    Red embeddings need all nine edges in g; blue witnesses need their edges
    in the complement. When n is given, blue witnesses must have exactly n
    leaves/blades.
    """
    order = g.order
    if isinstance(w, RedHajos):
        vs = w.embedding.vertices()
        if len(set(vs)) != 6:
            return False
        if any(not 0 <= v < order for v in vs):
            return False
        return all(g.has_edge(u, v) for u, v in w.embedding.required_edges())
    if isinstance(w, BlueStar):
        if n is not None and len(w.leaves) != n:
            return False
        vs = (w.center, *w.leaves)
        if len(set(vs)) != len(vs):
            return False
        if any(not 0 <= v < order for v in vs):
            return False
        return all(not g.has_edge(w.center, leaf) for leaf in w.leaves)
    if isinstance(w, BlueFan):
        if n is not None and len(w.blades) != n:
            return False
        vs = [w.center]
        for u, v in w.blades:
            vs.extend((u, v))
        if len(set(vs)) != len(vs):
            return False
        if any(not 0 <= x < order for x in vs):
            return False
        for u, v in w.blades:
            if u == v or g.has_edge(u, v):
                return False
            if g.has_edge(w.center, u) or g.has_edge(w.center, v):
                return False
        return True
    return False
