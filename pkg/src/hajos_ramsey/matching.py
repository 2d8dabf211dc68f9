"""Maximum matching in general graphs plus an exhaustive oracle.

The main algorithm is Edmonds' blossom algorithm with deterministic
ascending-index scan order, so repeated runs return the same matching.
"""
from __future__ import annotations

from .graphs import Graph

Edge = tuple[int, int]

ORACLE_MAX_ORDER = 16


class OrderTooLargeForOracle(ValueError):
    """Brute-force oracle refuses graphs with more than 16 vertices."""


def is_matching(g: Graph, edges: list[Edge]) -> bool:
    """True iff edges are pairwise disjoint and all present in g."""
    seen = 0
    for u, v in edges:
        if u == v or not (0 <= u < g.order and 0 <= v < g.order):
            return False
        if not g.has_edge(u, v):
            return False
        m = (1 << u) | (1 << v)
        if seen & m:
            return False
        seen |= m
    return True


def maximum_matching(g: Graph) -> list[Edge]:
    """Maximum-cardinality matching via the blossom algorithm.

    Scans roots and neighbors in ascending index order; output edges are
    normalized (u < v) and sorted.
    """
    n = g.order
    rows = g.rows
    match = [-1] * n

    # Greedy seed: pair each vertex with its lowest free neighbor.
    for v in range(n):
        if match[v] < 0:
            m = rows[v]
            while m:
                b = m & -m
                u = b.bit_length() - 1
                m ^= b
                if match[u] < 0:
                    match[u] = v
                    match[v] = u
                    break

    for root in range(n):
        if match[root] >= 0:
            continue
        parent = [-1] * n
        base = list(range(n))
        q = [root]
        inq = [False] * n
        inq[root] = True
        head = 0
        finish = -1
        while head < len(q):
            v = q[head]
            head += 1
            mv = rows[v]
            while mv:
                b = mv & -mv
                to = b.bit_length() - 1
                mv ^= b
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] >= 0 and parent[match[to]] >= 0):
                    # Odd cycle: find the lowest common ancestor over bases,
                    # then contract the blossom.
                    used = [False] * n
                    a = v
                    while True:
                        a = base[a]
                        used[a] = True
                        if match[a] < 0:
                            break
                        a = parent[match[a]]
                    bnode = base[to]
                    while not used[bnode]:
                        bnode = base[parent[match[bnode]]]
                    curbase = bnode
                    blossom = [False] * n
                    for x, other in ((v, to), (to, v)):
                        a = x
                        while base[a] != curbase:
                            bm = match[a]
                            blossom[base[a]] = True
                            blossom[base[bm]] = True
                            parent[a] = other
                            other = bm
                            a = parent[bm]
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = curbase
                            if not inq[i]:
                                inq[i] = True
                                q.append(i)
                elif parent[to] < 0:
                    parent[to] = v
                    if match[to] < 0:
                        finish = to
                        break
                    w = match[to]
                    if not inq[w]:
                        inq[w] = True
                        q.append(w)
            if finish >= 0:
                break
        if finish >= 0:
            u = finish
            while u >= 0:
                pv = parent[u]
                ppv = match[pv]
                match[u] = pv
                match[pv] = u
                u = ppv

    return sorted((v, match[v]) for v in range(n) if v < match[v])


def matching_of_size(g: Graph, k: int) -> list[Edge] | None:
    """A matching with exactly k edges, or None if none exists.

    A maximum matching truncated to k edges suffices: dropping edges keeps
    the matching property.
    """
    if k < 0:
        raise ValueError("matching size must be nonnegative")
    best = maximum_matching(g)
    if len(best) < k:
        return None
    return best[:k]


def brute_force_maximum_matching(g: Graph) -> list[Edge]:
    """Exhaustive maximum matching for graphs with at most 16 vertices.

    Memoized search over vertex subsets: the lowest vertex of a subset is
    either skipped or matched to each neighbor, which prunes the raw
    edge-subset space to at most 2^order states.
    """
    n = g.order
    if n > ORACLE_MAX_ORDER:
        raise OrderTooLargeForOracle(f"order {n} exceeds {ORACLE_MAX_ORDER}")
    rows = g.rows
    size: dict[int, int] = {0: 0}

    def nu(mask: int) -> int:
        s = size.get(mask)
        if s is not None:
            return s
        b = mask & -mask
        v = b.bit_length() - 1
        rest = mask ^ b
        best = nu(rest)
        m = rows[v] & rest
        while m:
            bb = m & -m
            m ^= bb
            c = 1 + nu(rest ^ bb)
            if c > best:
                best = c
        size[mask] = best
        return best

    full = (1 << n) - 1
    target = nu(full)
    edges: list[Edge] = []
    mask = full
    while mask and target:
        b = mask & -mask
        v = b.bit_length() - 1
        rest = mask ^ b
        if nu(rest) == target:
            mask = rest
            continue
        m = rows[v] & rest
        while m:
            bb = m & -m
            u = bb.bit_length() - 1
            m ^= bb
            if 1 + nu(rest ^ bb) == target:
                edges.append((v, u))
                mask = rest ^ bb
                target -= 1
                break
    return edges
