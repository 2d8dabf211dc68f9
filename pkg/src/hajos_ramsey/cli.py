"""Command-line surface: constructions, detection, extraction, verification
campaigns, CNF emission, and chromatic facts, wired for scripted use.

Exit codes: 0 for success or a certified report, 1 when a counterexample or
proof gap turned up, 2 for usage errors. Stdout is deterministic for fixed
argv/stdin/seed; wall-clock timings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterator, TextIO

from .constructions import (
    InvalidParameters,
    burr_construction,
    chromatic_info,
    fan_lower,
    star_even_lower,
    star_odd_lower,
)
from .detectors import (
    find_blue_fan,
    find_blue_star,
    find_hajos,
    find_k4,
    find_k5_minus_e,
    find_w4,
)
from .extract import Fan, InputSizeError, ProofGap, Star, arrow_witness
from .graphs import GraphError, from_graph6, to_graph6
from .sat import emit_star_arrowing_cnf, to_dimacs
from .verify import (
    TooManyColorings,
    random_sweep,
    verify_all_colorings,
    verify_construction,
    verify_star_upper_via_structure,
)

_JSON_OPTS = {"separators": (",", ":"), "sort_keys": True}


def _dump(obj: object) -> str:
    return json.dumps(obj, **_JSON_OPTS)


def _graph_lines(stream: TextIO) -> Iterator[str]:
    for raw in stream:
        line = raw.strip()
        if line:
            yield line


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hajos-ramsey",
        description="Ramsey arrowing toolkit for the Hajos graph versus stars and fans",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="emit an avoidance construction as graph6")
    p.add_argument(
        "--kind",
        required=True,
        choices=("star-even", "star-odd", "fan", "burr"),
    )
    p.add_argument("--n", type=int, help="target parameter (star/fan kinds)")
    p.add_argument("--chi", type=int, help="chromatic number (burr)")
    p.add_argument("--s", type=int, help="chromatic surplus (burr)")
    p.add_argument("--order", type=int, help="total vertex count (burr)")

    p = sub.add_parser("detect", help="scan graph6 lines on stdin for one pattern")
    p.add_argument(
        "--pattern",
        required=True,
        choices=("hajos", "k4", "k5e", "w4", "blue-star", "blue-fan"),
    )
    p.add_argument("--n", type=int, help="size parameter for blue patterns")

    p = sub.add_parser("extract", help="witness plus trace JSON per graph6 line")
    p.add_argument("--target", required=True, choices=("star", "fan"))
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("verify", help="run one verification campaign")
    p.add_argument(
        "--mode",
        required=True,
        choices=("exhaustive", "structure", "sweep", "construction"),
    )
    p.add_argument("--N", type=int, help="host order (exhaustive)")
    p.add_argument("--target", choices=("star", "fan"))
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument(
        "--kind",
        choices=("star-even", "star-odd", "fan"),
        help="construction kind (construction mode)",
    )

    p = sub.add_parser("sat", help="emit the star-avoidance CNF as DIMACS")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", help="write DIMACS here instead of stdout")

    sub.add_parser("chrom", help="chromatic number and surplus per graph6 line")
    return parser


def _cmd_construct(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.kind == "burr":
        if args.chi is None or args.s is None or args.order is None:
            parser.error("burr needs --chi, --s and --order")
        g = burr_construction(args.chi, args.s, args.order)
    else:
        if args.n is None:
            parser.error(f"{args.kind} needs --n")
        builder = {
            "star-even": star_even_lower,
            "star-odd": star_odd_lower,
            "fan": fan_lower,
        }[args.kind]
        g = builder(args.n)
    print(to_graph6(g))
    return 0


def _cmd_detect(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.pattern in ("blue-star", "blue-fan") and args.n is None:
        parser.error(f"{args.pattern} needs --n")
    for line in _graph_lines(sys.stdin):
        g = from_graph6(line)
        if args.pattern == "hajos":
            hit = find_hajos(g)
            obj = None if hit is None else {
                "kind": "red_hajos",
                "triangle": list(hit.triangle),
                "apexes": list(hit.apexes),
            }
        elif args.pattern == "k4":
            quad = find_k4(g)
            obj = None if quad is None else {"kind": "k4", "vertices": list(quad)}
        elif args.pattern == "k5e":
            hit5 = find_k5_minus_e(g)
            obj = None if hit5 is None else {
                "kind": "k5_minus_e",
                "quad": list(hit5[0]),
                "fifth": hit5[1],
            }
        elif args.pattern == "w4":
            wheel = find_w4(g)
            obj = None if wheel is None else {
                "kind": "wheel4",
                "hub": wheel.hub,
                "rim": list(wheel.rim),
            }
        elif args.pattern == "blue-star":
            star = find_blue_star(g, args.n)
            obj = None if star is None else star.to_json()
        else:
            fan = find_blue_fan(g, args.n)
            obj = None if fan is None else fan.to_json()
        print(_dump({"witness": obj}))
    return 0


def _cmd_extract(args: argparse.Namespace) -> int:
    target = Star(args.n) if args.target == "star" else Fan(args.n)
    worst = 0
    for line in _graph_lines(sys.stdin):
        g = from_graph6(line)
        try:
            witness, trace = arrow_witness(g, target)
        except ProofGap as gap:
            worst = 1
            records = [json.loads(l) for l in gap.trace.to_json_lines().splitlines()]
            print(_dump({"witness": None, "trace": records}))
            continue
        records = [json.loads(l) for l in trace.to_json_lines().splitlines()]
        print(_dump({"witness": witness.to_json(), "trace": records}))
    return worst


def _cmd_verify(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.mode == "exhaustive":
        if args.N is None or args.n is None:
            parser.error("exhaustive needs --N and --n")
        if args.target not in (None, "star"):
            parser.error("exhaustive scans support star targets only")
        report = verify_all_colorings(args.N, Star(args.n))
    elif args.mode == "structure":
        if args.n is None:
            parser.error("structure needs --n")
        report = verify_star_upper_via_structure(args.n)
    elif args.mode == "sweep":
        if args.target is None or args.n is None or args.trials is None:
            parser.error("sweep needs --target, --n and --trials")
        if args.seed is None:
            parser.error("sweep needs an explicit --seed")
        target = Star(args.n) if args.target == "star" else Fan(args.n)
        report = random_sweep(target, args.trials, args.seed)
    else:
        if args.kind is None or args.n is None:
            parser.error("construction needs --kind and --n")
        report = verify_construction(args.n, args.kind.replace("-", "_"))
    print(report.to_json(include_wall=False))
    print(f"wall_ms {report.wall_ms}", file=sys.stderr)
    return 0 if report.failed == 0 else 1


def _cmd_sat(args: argparse.Namespace) -> int:
    formula, varmap = emit_star_arrowing_cnf(args.N, args.n)
    text = to_dimacs(formula, varmap)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_chrom() -> int:
    for line in _graph_lines(sys.stdin):
        info = chromatic_info(from_graph6(line))
        print(_dump({"chi": info.chi, "surplus": info.surplus}))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "construct":
            return _cmd_construct(args, parser)
        if args.command == "detect":
            return _cmd_detect(args, parser)
        if args.command == "extract":
            return _cmd_extract(args)
        if args.command == "verify":
            return _cmd_verify(args, parser)
        if args.command == "sat":
            return _cmd_sat(args)
        return _cmd_chrom()
    except (
        GraphError,
        InvalidParameters,
        InputSizeError,
        TooManyColorings,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
