import random
from itertools import combinations
from math import comb

import pytest

from hajos_ramsey.constructions import star_even_lower, star_odd_lower
from hajos_ramsey.detectors import find_blue_star, find_hajos
from hajos_ramsey.graphs import Graph
from hajos_ramsey.sat import (
    CnfFormula,
    CounterBlock,
    EdgeVarMap,
    IncompleteAssignment,
    MalformedDimacs,
    OrderMismatch,
    OrderTooLarge,
    assignment_from_graph,
    emit_star_arrowing_cnf,
    eval_cnf,
    graph_from_assignment,
    hajos_automorphism_count,
    parse_dimacs,
    to_dimacs,
)


def graph_of_mask(N, pairs, mask):
    rows = [0] * N
    m = mask
    while m:
        low = m & -m
        u, v = pairs[low.bit_length() - 1]
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        m ^= low
    return Graph._from_rows(N, tuple(rows))


def counterexample_predicate(g, n):
    return find_hajos(g) is None and find_blue_star(g, n) is None


# -- variable map ---------------------------------------------------------------


def test_edge_var_map_layout():
    m = EdgeVarMap.for_order(5)
    assert m.num_edge_vars == 10
    expected = list(combinations(range(5), 2))
    assert list(m.pairs()) == expected
    for k, (u, v) in enumerate(expected, start=1):
        assert m.var(u, v) == k
        assert m.var(v, u) == k
        assert m.pair(k) == (u, v)


def test_edge_var_map_errors():
    m = EdgeVarMap.for_order(4)
    with pytest.raises(KeyError):
        m.var(0, 0)
    with pytest.raises(KeyError):
        m.var(0, 4)
    with pytest.raises(IndexError):
        m.pair(7)


# -- formula emission -------------------------------------------------------------


def test_pattern_symmetries():
    assert hajos_automorphism_count() == 6


def test_emit_clause_counts():
    formula, varmap = emit_star_arrowing_cnf(6, 2)
    pattern = [c for c in formula.clauses if len(c) == 9]
    assert len(pattern) == 120  # 6! over the 6 pattern symmetries
    assert all(all(lit < 0 for lit in c) for c in pattern)
    assert all(abs(lit) <= varmap.num_edge_vars for c in pattern for lit in c)

    formula8, _ = emit_star_arrowing_cnf(8, 2)
    pattern8 = [c for c in formula8.clauses if len(c) == 9 and all(l < 0 for l in c)]
    assert len(pattern8) == comb(8, 6) * 120


def test_emit_counter_shape():
    formula, varmap = emit_star_arrowing_cnf(7, 3)
    assert len(formula.counters) == 7
    aux_total = 0
    for v, block in enumerate(formula.counters):
        incident = {varmap.var(v, u) for u in range(7) if u != v}
        assert {-lit for lit in block.literals} == incident
        assert block.bound == 2
        assert block.aux_count() == (6 - 1) * 2
        aux_total += block.aux_count()
    assert formula.num_vars == varmap.num_edge_vars + aux_total


def test_emit_bounds():
    with pytest.raises(OrderTooLarge):
        emit_star_arrowing_cnf(65, 2)
    with pytest.raises(OrderTooLarge):
        emit_star_arrowing_cnf(1, 2)
    with pytest.raises(ValueError):
        emit_star_arrowing_cnf(6, 0)


def test_degenerate_counters():
    # n=1 means bound 0: unit clauses forcing every incident edge red
    formula, varmap = emit_star_arrowing_cnf(3, 1)
    assert formula.num_vars == varmap.num_edge_vars  # no aux vars
    assert eval_cnf(formula, {k: True for k in range(1, 4)})
    assert not eval_cnf(formula, {1: True, 2: True, 3: False})
    # m <= bound means no clauses at all
    wide, m2 = emit_star_arrowing_cnf(2, 5)
    assert wide.clauses == ()
    assert eval_cnf(wide, {1: False})
    assert eval_cnf(wide, {1: True})


# -- counter semantics end to end ------------------------------------------------


@pytest.mark.parametrize("N,n", [(4, 2), (5, 3)])
def test_counter_equivalence_exhaustive(N, n):
    """Below pattern size the formula reduces to the blue degree bound; the
    sequential counters must match a direct popcount on every assignment."""
    formula, varmap = emit_star_arrowing_cnf(N, n)
    pairs = list(combinations(range(N), 2))
    for mask in range(1 << len(pairs)):
        g = graph_of_mask(N, pairs, mask)
        a = assignment_from_graph(g, varmap)
        blue_ok = g.complement().max_degree() <= n - 1
        assert eval_cnf(formula, a) == blue_ok


# -- faithfulness against the detectors -------------------------------------------


def test_faithfulness_order6_sampled():
    formula, varmap = emit_star_arrowing_cnf(6, 2)
    pairs = list(combinations(range(6), 2))
    for mask in range(0, 1 << 15, 16):
        g = graph_of_mask(6, pairs, mask)
        a = assignment_from_graph(g, varmap)
        assert eval_cnf(formula, a) == counterexample_predicate(g, 2)


def test_faithfulness_random_orders():
    rng = random.Random(1312)
    for N in (7, 8, 9):
        for n in (2, 3):
            formula, varmap = emit_star_arrowing_cnf(N, n)
            pairs = list(combinations(range(N), 2))
            for _ in range(60):
                mask = rng.getrandbits(len(pairs))
                g = graph_of_mask(N, pairs, mask)
                a = assignment_from_graph(g, varmap)
                assert eval_cnf(formula, a) == counterexample_predicate(g, n)


def test_all_red_violates_pattern_clauses():
    formula, varmap = emit_star_arrowing_cnf(6, 2)
    a = {k: True for k in range(1, varmap.num_edge_vars + 1)}
    assert not eval_cnf(formula, a)


def test_known_satisfying_assignments():
    # below the threshold the avoidance construction satisfies the formula
    formula, varmap = emit_star_arrowing_cnf(5, 2)
    g = star_even_lower(2)
    assert eval_cnf(formula, assignment_from_graph(g, varmap))

    formula, varmap = emit_star_arrowing_cnf(8, 3)
    g = star_odd_lower(3)
    assert eval_cnf(formula, assignment_from_graph(g, varmap))


# -- assignment and graph conversions ----------------------------------------------


def test_assignment_roundtrip():
    rng = random.Random(51)
    varmap = EdgeVarMap.for_order(9)
    pairs = list(combinations(range(9), 2))
    for _ in range(20):
        g = graph_of_mask(9, pairs, rng.getrandbits(len(pairs)))
        a = assignment_from_graph(g, varmap)
        assert set(a) == set(range(1, varmap.num_edge_vars + 1))
        assert graph_from_assignment(a, varmap) == g


def test_conversion_errors():
    varmap = EdgeVarMap.for_order(6)
    with pytest.raises(OrderMismatch):
        assignment_from_graph(Graph.from_edges(5, []), varmap)
    partial = {k: True for k in range(1, varmap.num_edge_vars)}
    with pytest.raises(IncompleteAssignment):
        graph_from_assignment(partial, varmap)
    formula, _ = emit_star_arrowing_cnf(6, 2)
    with pytest.raises(IncompleteAssignment):
        eval_cnf(formula, partial)


# -- DIMACS serialization --------------------------------------------------------


def test_dimacs_roundtrip():
    formula, varmap = emit_star_arrowing_cnf(6, 2)
    text = to_dimacs(formula, varmap)
    parsed, parsed_map = parse_dimacs(text)
    assert parsed.num_vars == formula.num_vars
    assert parsed.num_edge_vars == formula.num_edge_vars
    assert parsed.clauses == formula.clauses
    assert parsed.counters == ()  # counter metadata has no DIMACS form
    assert list(parsed_map.pairs()) == list(varmap.pairs())
    assert to_dimacs(parsed, parsed_map) == text


def test_dimacs_header_and_comments():
    formula, varmap = emit_star_arrowing_cnf(5, 2)
    text = to_dimacs(formula, varmap)
    lines = text.splitlines()
    comment_lines = [ln for ln in lines if ln.startswith("c ")]
    assert len(comment_lines) == varmap.num_edge_vars
    assert comment_lines[0] == "c edge 0 1 var 1"
    header = next(ln for ln in lines if ln.startswith("p "))
    n_clauses = sum(1 for ln in lines if ln and not ln.startswith(("c", "p")))
    assert header == f"p cnf {formula.num_vars} {n_clauses}"
    assert all(ln.endswith(" 0") for ln in lines if not ln.startswith(("c", "p")))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: "",
        lambda t: t.replace("p cnf", "p sat", 1),
        lambda t: t.replace("c edge 0 1 var 1\n", "", 1),  # incomplete edge map
        lambda t: t + "1 2 0\n",  # clause count now wrong
        lambda t: t.replace(" 0\n", "\n", 1),  # unterminated clause
        lambda t: t + "99999 0\n",  # literal out of range (and count off)
        lambda t: t.replace("p cnf", "p cnf 7", 1),  # malformed header fields
    ],
)
def test_dimacs_malformed(mutate):
    formula, varmap = emit_star_arrowing_cnf(5, 2)
    text = to_dimacs(formula, varmap)
    with pytest.raises(MalformedDimacs):
        parse_dimacs(mutate(text))


def test_dimacs_eval_after_parse():
    """Aux-free formulas follow the plain CNF reading after a parse."""
    formula, varmap = emit_star_arrowing_cnf(3, 1)  # unit clauses only
    parsed, parsed_map = parse_dimacs(to_dimacs(formula, varmap))
    full = {k: True for k in range(1, 4)}
    assert eval_cnf(parsed, full)
    assert not eval_cnf(parsed, {1: True, 2: True, 3: False})
