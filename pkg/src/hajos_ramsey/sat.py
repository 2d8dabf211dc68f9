"""DIMACS CNF emission for lower-bound witness search.

Encodes "some red/blue coloring of K_N has no red Hajos graph and no blue
K_{1,n}" over one boolean variable per edge (true means red). The formula
is satisfiable exactly when N is below the star threshold, so an external
solver can hunt avoidance colorings; no solver is bundled, but eval_cnf
closes the loop on assignments produced here or decoded from solver output.

Fan targets are deliberately not encoded: blue-fan avoidance has no
per-vertex cardinality form, and copy enumeration over 2n+1 vertices is
out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Dict

from .detectors import hajos_graph
from .graphs import Graph

Assignment = Dict[int, bool]


class OrderTooLarge(ValueError):
    """Emission is capped at 64 vertices."""


class IncompleteAssignment(ValueError):
    """Assignment does not cover every edge variable."""


class OrderMismatch(ValueError):
    """Graph order disagrees with the edge variable map."""


class MalformedDimacs(ValueError):
    """Text is not a DIMACS file produced by this emitter."""


_MAX_EMIT_ORDER = 64


@dataclass(frozen=True)
class EdgeVarMap:
    """Lexicographic bijection between edges of K_N and variables 1..C(N,2)."""

    N: int
    _pairs: tuple[tuple[int, int], ...] = field(repr=False, compare=False)
    _index: dict[tuple[int, int], int] = field(repr=False, compare=False)

    @classmethod
    def for_order(cls, N: int) -> "EdgeVarMap":
        pairs = tuple(combinations(range(N), 2))
        index = {pair: k + 1 for k, pair in enumerate(pairs)}
        return cls(N, pairs, index)

    @property
    def num_edge_vars(self) -> int:
        return len(self._pairs)

    def var(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self._index[(u, v)]

    def pair(self, k: int) -> tuple[int, int]:
        return self._pairs[k - 1]

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return self._pairs


@dataclass(frozen=True)
class CounterBlock:
    """One sequential at-most-`bound` counter over the given literals.

    Auxiliary variable s(i, j), meaning "at least j of the first i literals
    hold", lives at aux_base + (i-1)*bound + (j-1) for 1 <= i < len(literals)
    and 1 <= j <= bound. Blocks with bound 0, or with too few literals to
    overflow, allocate no auxiliaries.
    """

    literals: tuple[int, ...]
    bound: int
    aux_base: int

    def aux_count(self) -> int:
        m = len(self.literals)
        if self.bound == 0 or m <= self.bound:
            return 0
        return (m - 1) * self.bound


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    num_edge_vars: int
    clauses: tuple[tuple[int, ...], ...]
    counters: tuple[CounterBlock, ...] = ()


# -- pattern copies -----------------------------------------------------------

_PATTERN_EDGES = tuple(hajos_graph().edges())
_copy_cache: tuple[tuple[tuple[int, int], ...], ...] | None = None
_aut_cache: int | None = None


def hajos_automorphism_count() -> int:
    """Order of the pattern's automorphism group, by brute permutation scan."""
    global _aut_cache
    if _aut_cache is None:
        base = frozenset(_PATTERN_EDGES)
        count = 0
        for p in permutations(range(6)):
            mapped = frozenset(
                (min(p[a], p[b]), max(p[a], p[b])) for a, b in _PATTERN_EDGES
            )
            if mapped == base:
                count += 1
        _aut_cache = count
    return _aut_cache


def _pattern_copies() -> tuple[tuple[tuple[int, int], ...], ...]:
    """Distinct labeled images of the 9-edge pattern on vertices 0..5."""
    global _copy_cache
    if _copy_cache is None:
        seen: set[frozenset[tuple[int, int]]] = set()
        copies: list[tuple[tuple[int, int], ...]] = []
        for p in permutations(range(6)):
            mapped = frozenset(
                (min(p[a], p[b]), max(p[a], p[b])) for a, b in _PATTERN_EDGES
            )
            if mapped not in seen:
                seen.add(mapped)
                copies.append(tuple(sorted(mapped)))
        copies.sort()
        aut = hajos_automorphism_count()
        if len(copies) * aut != 720:
            raise AssertionError("copy enumeration disagrees with |Aut|")
        _copy_cache = tuple(copies)
    return _copy_cache


# -- emission -----------------------------------------------------------------


def emit_star_arrowing_cnf(N: int, n: int) -> tuple[CnfFormula, EdgeVarMap]:
    """CNF for "no red Hajos copy, every vertex has at most n-1 blue edges".

    Clause layout is deterministic: one not-all-red clause per labeled copy
    per ascending 6-subset, then one sequential counter per vertex over its
    negated incident edge variables.
    """
    if not 2 <= N <= _MAX_EMIT_ORDER:
        raise OrderTooLarge(f"order must be between 2 and {_MAX_EMIT_ORDER}")
    if n < 1:
        raise ValueError("star targets need n >= 1")
    varmap = EdgeVarMap.for_order(N)
    clauses: list[tuple[int, ...]] = []
    for subset in combinations(range(N), 6):
        for copy in _pattern_copies():
            clauses.append(
                tuple(-varmap.var(subset[a], subset[b]) for a, b in copy)
            )
    bound = n - 1
    next_aux = varmap.num_edge_vars + 1
    counters: list[CounterBlock] = []
    for v in range(N):
        literals = tuple(
            -varmap.var(v, u) for u in range(N) if u != v
        )  # blue indicators around v
        block = CounterBlock(literals, bound, next_aux)
        counters.append(block)
        next_aux += block.aux_count()
        clauses.extend(_counter_clauses(block))
    formula = CnfFormula(
        num_vars=next_aux - 1,
        num_edge_vars=varmap.num_edge_vars,
        clauses=tuple(clauses),
        counters=tuple(counters),
    )
    return formula, varmap


def _counter_clauses(block: CounterBlock) -> list[tuple[int, ...]]:
    lits = block.literals
    k = block.bound
    m = len(lits)
    if m <= k:
        return []  # vacuous bound
    if k == 0:
        return [(-lit,) for lit in lits]

    def s(i: int, j: int) -> int:  # 1-based on both axes, i < m
        return block.aux_base + (i - 1) * k + (j - 1)

    out: list[tuple[int, ...]] = [(-lits[0], s(1, 1))]
    out.extend((-s(1, j),) for j in range(2, k + 1))
    for i in range(2, m):
        out.append((-lits[i - 1], s(i, 1)))
        out.append((-s(i - 1, 1), s(i, 1)))
        for j in range(2, k + 1):
            out.append((-lits[i - 1], -s(i - 1, j - 1), s(i, j)))
            out.append((-s(i - 1, j), s(i, j)))
        out.append((-lits[i - 1], -s(i - 1, k)))
    out.append((-lits[m - 1], -s(m - 1, k)))
    return out


# -- evaluation ---------------------------------------------------------------


def _literal_holds(values: list[bool], lit: int) -> bool:
    return values[lit] if lit > 0 else not values[-lit]


def eval_cnf(f: CnfFormula, a: Assignment) -> bool:
    """Evaluate under the canonical counter extension of an edge assignment.

    Auxiliaries are set to their counting semantics (s(i, j) holds when at
    least j of the first i literals do), which satisfies every internal
    counter clause exactly when each cardinality bound holds. Formulas
    reconstructed by parse_dimacs carry no counter metadata, so only
    aux-free formulas from that path can be evaluated.
    """
    for var in range(1, f.num_edge_vars + 1):
        if var not in a:
            raise IncompleteAssignment(f"edge variable {var} unassigned")
    values = [False] * (f.num_vars + 1)
    for var in range(1, f.num_edge_vars + 1):
        values[var] = bool(a[var])
    for block in f.counters:
        if block.aux_count() == 0:
            continue
        k = block.bound
        running = 0
        for i in range(1, len(block.literals)):
            if _literal_holds(values, block.literals[i - 1]):
                running += 1
            for j in range(1, k + 1):
                values[block.aux_base + (i - 1) * k + (j - 1)] = running >= j
    return all(
        any(_literal_holds(values, lit) for lit in clause) for clause in f.clauses
    )


def assignment_from_graph(g: Graph, m: EdgeVarMap) -> Assignment:
    if g.order != m.N:
        raise OrderMismatch(f"graph order {g.order} vs map order {m.N}")
    return {m.var(u, v): g.has_edge(u, v) for u, v in m.pairs()}


def graph_from_assignment(a: Assignment, m: EdgeVarMap) -> Graph:
    edges = []
    for u, v in m.pairs():
        var = m.var(u, v)
        if var not in a:
            raise IncompleteAssignment(f"edge variable {var} unassigned")
        if a[var]:
            edges.append((u, v))
    return Graph.from_edges(m.N, edges)


# -- DIMACS io ----------------------------------------------------------------


def to_dimacs(f: CnfFormula, m: EdgeVarMap) -> str:
    lines = [f"c edge {u} {v} var {m.var(u, v)}" for u, v in m.pairs()]
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    lines.extend(" ".join(str(lit) for lit in clause) + " 0" for clause in f.clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[CnfFormula, EdgeVarMap]:
    """Rebuild (formula, edge map) from to_dimacs output.

    Counter metadata is not representable in DIMACS, so the parsed formula
    has an empty counter registry; clauses and variable counts round-trip
    exactly.
    """
    edge_vars: dict[tuple[int, int], int] = {}
    header: tuple[int, int] | None = None
    clauses: list[tuple[int, ...]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 6 and parts[1] == "edge" and parts[4] == "var":
                edge_vars[(int(parts[2]), int(parts[3]))] = int(parts[5])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise MalformedDimacs(f"bad problem line: {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise MalformedDimacs("clause before problem line")
        lits = [int(tok) for tok in line.split()]
        if not lits or lits[-1] != 0:
            raise MalformedDimacs(f"clause not zero-terminated: {line!r}")
        clauses.append(tuple(lits[:-1]))
    if header is None:
        raise MalformedDimacs("missing problem line")
    if not edge_vars:
        raise MalformedDimacs("missing edge map comments")
    N = max(max(u, v) for u, v in edge_vars) + 1
    expected = EdgeVarMap.for_order(N)
    for u, v in expected.pairs():
        if edge_vars.get((u, v)) != expected.var(u, v):
            raise MalformedDimacs("edge map comments are not the full lex map")
    if len(edge_vars) != expected.num_edge_vars:
        raise MalformedDimacs("edge map comments are not the full lex map")
    num_vars, num_clauses = header
    if num_clauses != len(clauses):
        raise MalformedDimacs("clause count disagrees with problem line")
    for clause in clauses:
        for lit in clause:
            if lit == 0 or abs(lit) > num_vars:
                raise MalformedDimacs(f"literal {lit} outside variable range")
    formula = CnfFormula(
        num_vars=num_vars,
        num_edge_vars=expected.num_edge_vars,
        clauses=tuple(clauses),
        counters=(),
    )
    return formula, expected
