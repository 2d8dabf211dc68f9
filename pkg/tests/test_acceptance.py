"""Acceptance gate: each test runs one criterion at its stated tolerance
and prints a single PASS/FAIL line."""

import random
import time
from itertools import combinations

import networkx as nx

from hajos_ramsey.cli import main
from hajos_ramsey.constructions import chromatic_info, star_even_lower, star_odd_lower
from hajos_ramsey.detectors import find_blue_star, find_hajos, hajos_graph
from hajos_ramsey.extract import Fan, Star, extract_star, fan_order, star_order
from hajos_ramsey.graphs import Graph, from_graph6, to_graph6
from hajos_ramsey.matching import brute_force_maximum_matching, maximum_matching
from hajos_ramsey.sat import (
    assignment_from_graph,
    emit_star_arrowing_cnf,
    eval_cnf,
    to_dimacs,
)
from hajos_ramsey.verify import (
    random_sweep,
    verify_all_colorings,
    verify_construction,
    verify_star_upper_via_structure,
)

STAR_EVEN_RANGE = range(2, 201, 2)
STAR_ODD_RANGE = range(3, 200, 2)
FAN_RANGE = range(1, 151)


def _line(criterion: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE criterion {criterion}: {status} ({detail})")
    assert ok, f"criterion {criterion}: {detail}"


def _graphs_of_all_masks(N):
    pairs = list(combinations(range(N), 2))
    for mask in range(1 << len(pairs)):
        rows = [0] * N
        m = mask
        while m:
            low = m & -m
            u, v = pairs[low.bit_length() - 1]
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            m ^= low
        yield Graph._from_rows(N, tuple(rows))


def _as_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.order))
    h.add_edges_from(g.edges())
    return h


def test_criterion_1_star_n2_exact_value():
    start = time.perf_counter()
    upper = verify_all_colorings(6, Star(2))
    lower = verify_all_colorings(5, Star(2))
    target = _as_nx(star_even_lower(2))
    hit = any(
        nx.is_isomorphic(_as_nx(from_graph6(text)), target)
        for text in lower.counterexamples
    )
    elapsed = time.perf_counter() - start
    ok = (
        upper.certified
        and upper.total == 32768
        and not lower.certified
        and lower.failed == 26
        and hit
        and elapsed < 1.0
    )
    _line(1, ok, f"32768 colorings certified, 26 order-5 survivors, {elapsed:.2f}s")


def test_criterion_2_star_n3_exact_value():
    start = time.perf_counter()
    upper = verify_star_upper_via_structure(3)
    lower = verify_construction(3, "star_odd")
    elapsed = time.perf_counter() - start
    ok = upper.certified and lower.certified and elapsed < 30.0
    _line(2, ok, f"{upper.total} structure classes certified, {elapsed:.1f}s")


def test_criterion_3_constructions_at_scale():
    start = time.perf_counter()
    bad = []
    for n in STAR_EVEN_RANGE:
        if not verify_construction(n, "star_even").certified:
            bad.append(("star_even", n))
    for n in STAR_ODD_RANGE:
        if not verify_construction(n, "star_odd").certified:
            bad.append(("star_odd", n))
    for n in FAN_RANGE:
        if not verify_construction(n, "fan").certified:
            bad.append(("fan", n))
    elapsed = time.perf_counter() - start
    count = len(STAR_EVEN_RANGE) + len(STAR_ODD_RANGE) + len(FAN_RANGE)
    ok = not bad and elapsed < 300.0
    _line(3, ok, f"{count} constructions certified up to order 601, {elapsed:.1f}s")


def test_criterion_4_fan_extractor_totality_at_111():
    report = random_sweep(Fan(111), 100, seed=42)
    per_trial = report.wall_ms / 100 / 1000
    ok = (
        report.total == 100
        and report.failed == 0
        and "ProofGap" not in report.case_histogram
        and per_trial < 10.0
    )
    _line(4, ok, f"100/100 witnesses on 446 vertices, {per_trial:.3f}s per trial")


def test_criterion_5_star_extractor_totality():
    even = random_sweep(Star(100), 500, seed=100)
    odd = random_sweep(Star(101), 500, seed=101)
    per_trial = (even.wall_ms + odd.wall_ms) / 1000 / 1000
    ok = (
        even.failed == 0
        and odd.failed == 0
        and even.total == odd.total == 500
        and "ProofGap" not in even.case_histogram
        and "ProofGap" not in odd.case_histogram
        and per_trial < 1.0
    )
    _line(5, ok, f"1000/1000 witnesses at orders 202 and 205, {per_trial:.4f}s per trial")


def test_criterion_6_matching_oracle_equivalence():
    start = time.perf_counter()
    mismatches = 0
    for g in _graphs_of_all_masks(7):
        if len(maximum_matching(g)) != len(brute_force_maximum_matching(g)):
            mismatches += 1
    rng = random.Random(6262)
    for _ in range(10_000):
        order = rng.randint(1, 16)
        p = rng.random()
        edges = [
            (u, v)
            for u in range(order)
            for v in range(u + 1, order)
            if rng.random() < p
        ]
        g = Graph.from_edges(order, edges)
        if len(maximum_matching(g)) != len(brute_force_maximum_matching(g)):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 300.0
    _line(6, ok, f"2^21 + 10^4 graphs, {mismatches} mismatches, {elapsed:.0f}s")


def test_criterion_7_chromatic_facts():
    info = chromatic_info(hajos_graph())
    identities = all(
        2 * (n + 1 - 1) + 2 == 2 * n + 2 and star_order(n) == 2 * n + 2
        for n in STAR_EVEN_RANGE
    )
    identities = identities and all(
        star_order(n) == 2 * n + 3 for n in STAR_ODD_RANGE
    )
    identities = identities and all(
        2 * (2 * n + 1 - 1) + 2 == 4 * n + 2 and fan_order(n) == 4 * n + 2
        for n in FAN_RANGE
    )
    ok = (info.chi, info.surplus) == (3, 2) and identities
    _line(7, ok, f"chi={info.chi} surplus={info.surplus}, threshold identities hold")


def test_criterion_8_sat_faithfulness():
    start = time.perf_counter()
    formula, varmap = emit_star_arrowing_cnf(6, 2)
    mismatches = satisfiable = 0
    for g in _graphs_of_all_masks(6):
        model = eval_cnf(formula, assignment_from_graph(g, varmap))
        predicate = find_hajos(g) is None and find_blue_star(g, 2) is None
        mismatches += model != predicate
        satisfiable += model
    f5, m5 = emit_star_arrowing_cnf(5, 2)
    even_ok = eval_cnf(f5, assignment_from_graph(star_even_lower(2), m5))
    f8, m8 = emit_star_arrowing_cnf(8, 3)
    odd_ok = eval_cnf(f8, assignment_from_graph(star_odd_lower(3), m8))
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and satisfiable == 0 and even_ok and odd_ok and elapsed < 60.0
    _line(8, ok, f"32768 checks, {mismatches} mismatches, constructions satisfy, {elapsed:.0f}s")


def test_criterion_9_determinism_and_codec(monkeypatch, capsys):
    # the seeded surfaces must reproduce byte for byte
    sweeps = [
        random_sweep(Star(3), 40, seed=11).to_json(include_wall=False),
        random_sweep(Fan(111), 5, seed=19).to_json(include_wall=False),
    ]
    again = [
        random_sweep(Star(3), 40, seed=11).to_json(include_wall=False),
        random_sweep(Fan(111), 5, seed=19).to_json(include_wall=False),
    ]
    rng = random.Random(99)
    fixed = Graph.from_edges(
        9, [(u, v) for u in range(9) for v in range(u + 1, 9) if rng.random() < 0.5]
    )
    traces = extract_star(fixed, 3)[1].to_json_lines()
    traces_again = extract_star(fixed, 3)[1].to_json_lines()
    f, m = emit_star_arrowing_cnf(8, 3)
    dimacs_pair = (to_dimacs(f, m), to_dimacs(*emit_star_arrowing_cnf(8, 3)))
    argv = ["verify", "--mode", "sweep", "--target", "star", "--n", "4",
            "--trials", "15", "--seed", "3"]
    main(argv)
    cli_one = capsys.readouterr().out
    main(argv)
    cli_two = capsys.readouterr().out

    rng = random.Random(446)
    roundtrip_failures = 0
    checked = 0
    for _ in range(10_000):
        order = rng.randint(0, 446)
        cap = order * (order - 1) // 2
        m_edges = min(rng.randint(0, 3 * order + 1), cap)
        edges = set()
        while len(edges) < m_edges:
            u = rng.randrange(order)
            v = rng.randrange(order)
            if u != v:
                edges.add((min(u, v), max(u, v)))
        g = Graph.from_edges(order, sorted(edges))
        checked += 1
        if from_graph6(to_graph6(g)) != g:
            roundtrip_failures += 1
    for g in (
        Graph.from_edges(446, []),
        Graph.from_edges(446, list(combinations(range(446), 2))),
        Graph.from_edges(0, []),
        Graph.from_edges(1, []),
    ):
        checked += 1
        if from_graph6(to_graph6(g)) != g:
            roundtrip_failures += 1

    ok = (
        sweeps == again
        and traces == traces_again
        and dimacs_pair[0] == dimacs_pair[1]
        and cli_one == cli_two
        and roundtrip_failures == 0
    )
    _line(9, ok, f"byte-identical reruns, {checked} codec roundtrips clean")
