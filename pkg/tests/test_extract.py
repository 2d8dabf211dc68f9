import json
import random
from itertools import combinations

import pytest

from hajos_ramsey.constructions import complete_multipartite
from hajos_ramsey.detectors import BlueFan, BlueStar, RedHajos, verify_witness
from hajos_ramsey.extract import (
    CaseTag,
    Fan,
    InputSizeError,
    ProofGap,
    ProofTrace,
    Star,
    arrow_witness,
    extract_fan,
    extract_star,
    fan_order,
    replay_trace,
    star_order,
    threshold_order,
)
from hajos_ramsey.extract import _Ctx, _star_case3_even, _star_case3_odd
from hajos_ramsey.graphs import Graph


def random_graph(order, p, rng):
    edges = [
        (u, v)
        for u in range(order)
        for v in range(u + 1, order)
        if rng.random() < p
    ]
    return Graph.from_edges(order, edges)


def checked(g, target):
    """Extract, then re-verify the witness and replay the trace."""
    witness, trace = arrow_witness(g, target)
    assert verify_witness(g, witness, n=target.n)
    assert replay_trace(g, trace)
    return witness, trace


# -- sizes and dispatch -------------------------------------------------------


def test_order_formulas():
    assert star_order(2) == 6 and star_order(3) == 9
    assert star_order(4) == 10 and star_order(5) == 13
    assert fan_order(2) == 10 and fan_order(111) == 446
    assert threshold_order(Star(7)) == 17
    assert threshold_order(Fan(10)) == 42


def test_input_size_errors():
    g9 = Graph.from_edges(9, [])
    with pytest.raises(InputSizeError):
        extract_star(g9, 4)  # order 10 expected
    with pytest.raises(InputSizeError):
        extract_star(Graph.from_edges(6, []), 1)
    with pytest.raises(InputSizeError):
        extract_fan(g9, 2)  # order 10 expected
    with pytest.raises(InputSizeError):
        extract_fan(Graph.from_edges(6, []), 1)
    with pytest.raises(TypeError):
        arrow_witness(g9, "star")


# -- star: exhaustive n=2 -----------------------------------------------------


def test_star_exhaustive_order6():
    """All 32768 colorings of K_6: extract, verify, case split 32692/76."""
    pairs = list(combinations(range(6), 2))
    histogram = {}
    for mask in range(1 << 15):
        rows = [0] * 6
        m = mask
        while m:
            low = m & -m
            u, v = pairs[low.bit_length() - 1]
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            m ^= low
        g = Graph._from_rows(6, tuple(rows))
        witness, trace = extract_star(g, 2)
        assert verify_witness(g, witness, n=2)
        if mask % 32 == 0:
            assert replay_trace(g, trace)
        tag = trace.terminal.value
        histogram[tag] = histogram.get(tag, 0) + 1
    assert histogram == {"StarBlueExit": 32692, "StarSpecialN2": 76}


def test_star_special_n2_pinned():
    """Complement a perfect matching: the paired assembly is deterministic."""
    blue = [(0, 1), (2, 3), (4, 5)]
    g = Graph.from_edges(6, [e for e in combinations(range(6), 2) if e not in blue])
    witness, trace = checked(g, Star(2))
    assert trace.terminal is CaseTag.STAR_SPECIAL_N2
    assert isinstance(witness, RedHajos)
    assert witness.embedding.triangle == (0, 2, 4)
    assert witness.embedding.apexes == (5, 3, 1)


# -- star: structured fixtures ------------------------------------------------


def test_star_case1_no_k4():
    g = complete_multipartite([3, 3, 3])  # red is K4-free, blue is 3K_3
    witness, trace = checked(g, Star(3))
    assert trace.terminal is CaseTag.STAR_CASE1_NO_K4
    assert isinstance(witness, RedHajos)


def test_star_case2_k5e():
    # complement of C_10: red K5 on the even vertices, blue degrees all 2
    c10 = Graph.from_edges(10, [(i, (i + 1) % 10) for i in range(10)])
    g = c10.complement()
    witness, trace = checked(g, Star(4))
    assert trace.terminal is CaseTag.STAR_CASE2_K5E
    assert isinstance(witness, RedHajos)


def test_star_case3_even_triangular_graph():
    """Line graph of K_5: K4s but no K5 minus an edge, complement Petersen."""
    vertices = list(combinations(range(5), 2))
    edges = [
        (i, j)
        for i in range(10)
        for j in range(i + 1, 10)
        if set(vertices[i]) & set(vertices[j])
    ]
    g = Graph.from_edges(10, edges)
    witness, trace = checked(g, Star(4))
    assert trace.terminal is CaseTag.STAR_CASE3_K4_EVEN
    assert isinstance(witness, RedHajos)


CASE3_EVEN_BASE = [
    (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
    (4, 0), (4, 1), (5, 0), (5, 1), (6, 0), (6, 1),
    (7, 2), (8, 2), (9, 2),
]


def test_star_case3_even_reroute_to_case2():
    """A second common neighbor pair turns the quad into a K5 minus an edge."""
    g = Graph.from_edges(10, CASE3_EVEN_BASE + [(3, 5), (4, 5)])
    ctx = _Ctx(g, 4, ProofTrace("star", 4, 10))
    witness, trace = _star_case3_even(ctx, (0, 1, 2, 3))
    assert trace.terminal is CaseTag.STAR_CASE2_K5E
    assert isinstance(witness, RedHajos)
    assert witness.embedding.triangle == (0, 1, 3)
    assert witness.embedding.apexes == (4, 2, 5)
    assert verify_witness(g, witness)
    assert replay_trace(g, trace)


def test_star_case3_even_blue_fallback():
    """A red-isolated vertex inside the candidate set yields the blue star."""
    g = Graph.from_edges(10, CASE3_EVEN_BASE + [(5, 6)])
    ctx = _Ctx(g, 4, ProofTrace("star", 4, 10))
    witness, trace = _star_case3_even(ctx, (0, 1, 2, 3))
    assert trace.terminal is CaseTag.STAR_BLUE_EXIT
    assert isinstance(witness, BlueStar)
    assert witness.center == 4
    assert witness.leaves == (2, 3, 5, 6)
    assert verify_witness(g, witness, n=4)
    assert replay_trace(g, trace)


def test_star_case3_odd_direct():
    """Direct drive of the odd assembly; unreachable from dispatch at the
    threshold order, where quad attachment forces a blue star first."""
    g = Graph.from_edges(
        9,
        [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 0), (4, 1), (5, 1), (5, 2)],
    )
    ctx = _Ctx(g, 3, ProofTrace("star", 3, 9))
    witness, trace = _star_case3_odd(ctx, (0, 1, 2, 3))
    assert isinstance(witness, RedHajos)
    assert witness.embedding.triangle == (0, 1, 2)
    assert witness.embedding.apexes == (4, 3, 5)
    assert verify_witness(g, witness)
    assert replay_trace(g, trace)


def test_star_case3_odd_unreachable_from_dispatch():
    """At order 2n+3 a blue-independent quad without a K5 minus an edge
    would need 4n-2 blue edges into the quad, but the blue degree bound
    allows only 4n-4. Every dispatched odd-n extraction therefore lands
    in another case; scan a sample to back the counting argument."""
    rng = random.Random(551)
    for _ in range(300):
        g = random_graph(9, rng.random(), rng)
        witness, trace = extract_star(g, 3)
        assert trace.terminal is not CaseTag.STAR_CASE3_K4_ODD
        assert verify_witness(g, witness, n=3)


def test_star_random_sweep_small_n():
    rng = random.Random(77)
    seen = set()
    for n in (3, 4, 7, 10):
        for _ in range(40):
            g = random_graph(star_order(n), rng.random(), rng)
            witness, trace = checked(g, Star(n))
            seen.add(trace.terminal)
    assert CaseTag.STAR_BLUE_EXIT in seen
    assert CaseTag.STAR_CASE2_K5E in seen


# -- fan: simple structured cases ----------------------------------------------


def test_fan_no_wheel_blue_exit():
    n = 3
    g = complete_multipartite([2 * n + 1, 2 * n + 1])  # bipartite red, no W4
    witness, trace = checked(g, Fan(n))
    assert trace.terminal is CaseTag.FAN_CASE2_NO_WHEEL_BLUE_EXIT
    assert isinstance(witness, BlueFan)


def test_fan_chord_violation():
    n = 3
    g = complete_multipartite([2 * n, 2 * n, 1, 1])
    witness, trace = checked(g, Fan(n))
    assert trace.terminal is CaseTag.FAN_CASE2_MIN_DEGREE
    assert isinstance(witness, RedHajos)


def blue_graph(order, blue_edges):
    """Complete graph minus the listed blue edges."""
    full = set((u, v) for u in range(order) for v in range(u + 1, order))
    for e in blue_edges:
        full.discard(tuple(sorted(e)))
    return Graph.from_edges(order, sorted(full))


def case1_fixture(n, member_count, inner_pairs):
    """Vertex 0 blue-adjacent to a set S; S carries a controlled blue matching."""
    order = fan_order(n)
    s = list(range(1, member_count + 1))
    blue = [(0, v) for v in s]
    blue += [(s[2 * i], s[2 * i + 1]) for i in range(inner_pairs)]
    return blue_graph(order, blue)


def test_fan_case1_blue_fan():
    n = 4
    g = case1_fixture(n, 2 * n + 2, n)  # inner matching already big enough
    witness, trace = checked(g, Fan(n))
    assert trace.terminal is CaseTag.FAN_CASE1_BIG_BLUE_DEGREE
    assert isinstance(witness, BlueFan)
    assert witness.center == 0


def test_fan_case1_red_clique_six():
    n = 4
    g = case1_fixture(n, 2 * n + 2, n - 2)  # 6 unmatched members
    witness, trace = checked(g, Fan(n))
    assert trace.terminal is CaseTag.FAN_CASE1_BIG_BLUE_DEGREE
    assert isinstance(witness, RedHajos)


def test_fan_case1_five_plus_endpoint():
    n = 4
    g = case1_fixture(n, 2 * n + 3, n - 1)  # 5 unmatched members
    witness, trace = checked(g, Fan(n))
    assert trace.terminal is CaseTag.FAN_CASE1_BIG_BLUE_DEGREE
    assert isinstance(witness, RedHajos)


def test_fan_case1_four_plus_two_endpoints():
    n = 4
    g = case1_fixture(n, 2 * n + 2, n - 1)  # 4 unmatched members
    witness, trace = checked(g, Fan(n))
    assert trace.terminal is CaseTag.FAN_CASE1_BIG_BLUE_DEGREE
    assert isinstance(witness, RedHajos)


def test_fan_case1_n2_gap():
    """With n=2 the unmatched four have a single matched edge to lean on,
    which is one short; the argument genuinely stalls below n=3."""
    n = 2
    g = case1_fixture(n, 2 * n + 2, 1)
    with pytest.raises(ProofGap) as exc:
        extract_fan(g, n)
    assert "fewer than two matched edges" in exc.value.reason
    assert replay_trace(g, exc.value.trace)  # gap traces still replay


# -- fan: deep second-case fixtures -------------------------------------------

N_DEEP = 10
ORDER_DEEP = 42


def deep_fixture(a_hi=20, intra_a=((9, 10), (9, 11), (12, 13)), w_extra=(), drop=()):
    """Red wheel at 0 with rim 1-4, two cross-joined cores, four W vertices.

    Every vertex keeps red degree at least 20, pinning dispatch into the
    minimum-degree case with hub 0 and rim (1, 2, 3, 4).
    """
    A = list(range(5, a_hi + 1))
    B = list(range(a_hi + 1, 38))
    W = [38, 39, 40, 41]
    edges = set()

    def add(u, v):
        edges.add((min(u, v), max(u, v)))

    for r in (1, 2, 3, 4):
        add(0, r)
    for u, v in ((1, 2), (2, 3), (3, 4), (1, 4)):
        add(u, v)
    for a in A:
        add(a, 2)
        add(a, 4)
        add(0, a)
        for b in B:
            add(a, b)
    for b in B:
        add(b, 1)
        add(b, 3)
    for u, v in intra_a:
        add(u, v)
    add(38, 2)
    add(39, 4)
    for w in W:
        for b in B:
            add(w, b)
    add(38, 40)
    add(38, 41)
    add(39, 40)
    add(39, 41)
    add(40, 41)
    for u, v in w_extra:
        add(u, v)
    for e in drop:
        edges.discard(tuple(sorted(e)))
    return Graph.from_edges(ORDER_DEEP, sorted(edges))


def test_fan_deep_base_blue_fan():
    g = deep_fixture()
    witness, trace = checked(g, Fan(N_DEEP))
    assert trace.terminal is CaseTag.FAN_CASE2_MIN_DEGREE
    assert isinstance(witness, BlueFan)
    assert witness.center == 1
    expected = [(5, 40), (38, 39)] + [(9, 12)] + [
        (3, 6), (7, 8), (10, 11), (13, 14), (15, 16), (17, 18), (19, 20)
    ]
    assert list(witness.blades) == expected
    stages = [e for e in trace.events if e.kind == "matching-built"]
    assert len(stages) == 3


def test_fan_deep_claim2_path_violation():
    g = deep_fixture(intra_a=[(9, 10), (10, 11), (11, 12)])
    witness, trace = checked(g, Fan(N_DEEP))
    assert isinstance(witness, RedHajos)
    assert list(witness.embedding.triangle) == [10, 11, 2]
    assert list(witness.embedding.apexes) == [4, 9, 12]


def test_fan_deep_claim2_triangle_violation():
    g = deep_fixture(intra_a=[(9, 10), (9, 11), (10, 11)])
    witness, trace = checked(g, Fan(N_DEEP))
    assert isinstance(witness, RedHajos)
    assert list(witness.embedding.triangle) == [9, 10, 11]
    assert list(witness.embedding.apexes) == [0, 2, 4]


def claim3_fixture(intra_a):
    """Variant whose W vertices melt into the cores, leaving claim 3 to fire."""
    A = list(range(5, 24))
    B = list(range(24, 38))
    edges = set()

    def add(u, v):
        edges.add((min(u, v), max(u, v)))

    for r in (1, 2, 3, 4):
        add(0, r)
    for u, v in ((1, 2), (2, 3), (3, 4), (1, 4)):
        add(u, v)
    for a in A:
        add(a, 2)
        add(a, 4)
        add(0, a)
        for b in B:
            add(a, b)
        for x in (38, 39, 40, 41):
            add(a, x)
    for b in B:
        add(b, 1)
        add(b, 3)
    add(38, 1)
    add(39, 3)
    add(40, 1)
    add(40, 3)
    add(41, 1)
    add(41, 3)
    for u, v in intra_a:
        add(u, v)
    return Graph.from_edges(ORDER_DEEP, sorted(edges))


@pytest.mark.parametrize(
    "intra_a",
    [
        ((9, 10), (9, 11), (12, 13)),  # two components in the leftover set
        ((9, 10), (9, 11)),  # one
        (),  # none
    ],
)
def test_fan_deep_claim3_component_counts(intra_a):
    g = claim3_fixture(list(intra_a))
    witness, trace = checked(g, Fan(N_DEEP))
    assert trace.terminal is CaseTag.FAN_CASE2_MIN_DEGREE
    assert isinstance(witness, BlueFan)
    assert witness.center == 1


def test_fan_deep_claim4_three_uncovered():
    extra = [(w, a) for w in (38, 39, 40) for a in range(5, 21)] + [(38, 39)]
    g = deep_fixture(w_extra=extra)
    witness, trace = checked(g, Fan(N_DEEP))
    assert isinstance(witness, RedHajos)
    assert list(witness.embedding.triangle) == [38, 39, 40]
    assert list(witness.embedding.apexes) == [5, 6, 7]


def test_fan_deep_claim4_split_rims():
    extra = [(w, a) for w in (38, 39) for a in range(5, 21)]
    extra += [(38, 39), (38, 40), (38, 41), (39, 40), (39, 41)]
    g = deep_fixture(w_extra=extra)
    witness, trace = checked(g, Fan(N_DEEP))
    assert isinstance(witness, RedHajos)
    assert list(witness.embedding.triangle) == [38, 39, 7]
    assert list(witness.embedding.apexes) == [6, 2, 4]


def test_fan_deep_claim4_mixed_pair():
    extra = [(w, a) for w in (39, 40) for a in range(5, 21)] + [(38, 39)]
    g = deep_fixture(w_extra=extra)
    witness, trace = checked(g, Fan(N_DEEP))
    assert isinstance(witness, RedHajos)
    assert list(witness.embedding.triangle) == [39, 40, 5]
    assert list(witness.embedding.apexes) == [6, 4, 21]


def test_fan_deep_claim4_core_pair():
    extra = [(w, a) for w in (40, 41) for a in range(5, 20)]
    extra += [(38, 4), (39, 2), (0, 38)]
    g = deep_fixture(a_hi=19, w_extra=extra)
    witness, trace = checked(g, Fan(N_DEEP))
    assert isinstance(witness, RedHajos)
    assert list(witness.embedding.triangle) == [20, 40, 41]
    assert list(witness.embedding.apexes) == [5, 6, 7]


def test_fan_deep_lone_star_weave():
    intra = [(5, x) for x in range(6, 21)]
    extra = [(39, a) for a in range(5, 21)]
    extra += [(38, 39), (38, 5), (38, 6), (40, 5), (40, 6)]
    g = deep_fixture(intra_a=intra, w_extra=extra)
    witness, trace = checked(g, Fan(N_DEEP))
    assert isinstance(witness, RedHajos)
    assert list(witness.embedding.triangle) == [39, 5, 9]
    assert list(witness.embedding.apexes) == [6, 4, 2]


def test_fan_deep_lone_star_covertex():
    intra = [(5, x) for x in range(6, 21)]
    g = deep_fixture(intra_a=intra, w_extra=[(40, 5)])
    witness, trace = checked(g, Fan(N_DEEP))
    assert isinstance(witness, BlueFan)
    assert witness.center == 1
    assert (3, 5) in witness.blades


def test_fan_deep_single_uncovered_covertex():
    extra = [(40, a) for a in range(5, 21)] + [(40, 38), (40, 39)]
    g = deep_fixture(w_extra=extra)
    witness, trace = checked(g, Fan(N_DEEP))
    assert isinstance(witness, BlueFan)
    assert witness.center == 1
    assert (3, 40) in witness.blades


def test_fan_random_at_guaranteed_n():
    rng = random.Random(202)
    for p in (0.2, 0.5, 0.8):
        for _ in range(2):
            g = random_graph(fan_order(111), p, rng)
            checked(g, Fan(111))


def test_fan_random_small_n_gaps_allowed():
    rng = random.Random(909)
    gaps = 0
    for _ in range(60):
        n = rng.choice((4, 6, 8))
        g = random_graph(fan_order(n), rng.random(), rng)
        try:
            checked(g, Fan(n))
        except ProofGap as exc:
            gaps += 1
            assert replay_trace(g, exc.trace)
    assert gaps <= 60  # gaps are legal below the guaranteed range


# -- traces: serialization, determinism, replay strictness ---------------------


def test_trace_json_roundtrip():
    g = deep_fixture()
    _, trace = extract_fan(g, N_DEEP)
    text = trace.to_json_lines()
    back = ProofTrace.from_json_lines(text)
    assert back.to_json_lines() == text
    assert replay_trace(g, back)
    head = json.loads(text.splitlines()[0])
    assert head == {"target": "fan", "n": N_DEEP, "order": ORDER_DEEP}


def test_trace_determinism():
    rng = random.Random(40)
    for _ in range(10):
        g = random_graph(star_order(5), 0.5, rng)
        _, t1 = extract_star(g, 5)
        _, t2 = extract_star(g, 5)
        assert t1.to_json_lines() == t2.to_json_lines()
    g = deep_fixture()
    assert extract_fan(g, N_DEEP)[1].to_json_lines() == extract_fan(g, N_DEEP)[1].to_json_lines()


def test_trace_event_validation():
    trace = ProofTrace("star", 3, 9)
    with pytest.raises(ValueError):
        trace.log("invented-kind", "nope")
    with pytest.raises(ValueError):
        trace.log("set-built", "nope", bogus_key=[1])


def test_replay_rejects_tampered_edges():
    g = complete_multipartite([3, 3, 3])
    _, trace = extract_star(g, 3)
    text = trace.to_json_lines()

    lines = text.splitlines()
    tampered = None
    for i, ln in enumerate(lines):
        obj = json.loads(ln)
        payload = obj.get("payload", {})
        if "red_edges" in payload and payload["red_edges"]:
            payload["red_edges"][0] = [0, 1]  # same part: blue in this host
            tampered = "\n".join(lines[:i] + [json.dumps(obj)] + lines[i + 1:]) + "\n"
            break
    assert tampered is not None
    assert not replay_trace(g, ProofTrace.from_json_lines(tampered))


def test_replay_rejects_tampered_witness():
    g = complete_multipartite([3, 3, 3])
    _, trace = extract_star(g, 3)
    lines = trace.to_json_lines().splitlines()
    last = json.loads(lines[-1])
    last["witness"]["vertices"]["triangle"][0] = last["witness"]["vertices"]["triangle"][1]
    bad = "\n".join(lines[:-1] + [json.dumps(last)]) + "\n"
    assert not replay_trace(g, ProofTrace.from_json_lines(bad))


def test_replay_rejects_overlapping_matching():
    g = deep_fixture()
    _, trace = extract_fan(g, N_DEEP)
    lines = trace.to_json_lines().splitlines()
    bad = None
    for i, ln in enumerate(lines):
        obj = json.loads(ln)
        payload = obj.get("payload", {})
        entries = payload.get("blue_matching")
        if entries and len(entries) >= 2:
            entries[1] = entries[0]  # duplicate edge: vertices overlap
            bad = "\n".join(lines[:i] + [json.dumps(obj)] + lines[i + 1:]) + "\n"
            break
    assert bad is not None
    assert not replay_trace(g, ProofTrace.from_json_lines(bad))


def test_replay_checks_wrong_host():
    """A trace replayed against a different graph must fail."""
    g = complete_multipartite([3, 3, 3])
    _, trace = extract_star(g, 3)
    other = complete_multipartite([4, 4, 1])
    assert not replay_trace(other, trace)


def test_gap_trace_replays_true():
    g = case1_fixture(2, 6, 1)
    with pytest.raises(ProofGap) as exc:
        extract_fan(g, 2)
    trace = exc.value.trace
    text = trace.to_json_lines()
    terminal = json.loads(text.splitlines()[-1])
    assert terminal["case"] is None and "proof_gap" in terminal
    assert replay_trace(g, ProofTrace.from_json_lines(text))
