"""``hypersketch`` command-line interface.

Every command writes JSON objects (one per line) or hypergraph text to
stdout and logs to stderr. Exit codes: 0 success/pass, 1 experiment failed,
2 usage or input error, 3 resource guard hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .contract import contraction_trials, sunflower
from .experiments import EXPERIMENTS, UnknownExperimentError, run_experiment
from .hypercore import (
    CUT_RTOL,
    Cut,
    InvalidArgumentError,
    ParseError,
    ResourceLimitError,
    cut_weights,
    parse_hypergraph,
    serialize_hypergraph,
)
from .maxcutlab import build_gadget, cycle_lengths, exact_max_cut, gadget_expected_value, gen_bhh, two_party_values
from .mincut import min_cut, strong_connectivities
from .satsketch import estimate_value, load_sketch, parse_dimacs, sketch_formula
from .sparsify import SparsifyParams, StreamError, sparsify, streaming_sparsify, verify_sparsifier

log = logging.getLogger("hypersketch")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, allow_nan=False))


def _read_hypergraph(path: str):
    return parse_hypergraph(Path(path).read_text(encoding="utf-8"))


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_mincut(args) -> int:
    H = _read_hypergraph(args.hypergraph)
    cut, w = min_cut(H, method=args.method, seed=args.seed)
    _emit({"weight": w, "side": cut.canonical().bitstring()})
    return EXIT_OK


def cmd_strength(args) -> int:
    H = _read_hypergraph(args.hypergraph)
    k = strong_connectivities(H)
    _emit({"k": [v if math.isfinite(v) else "inf" for v in k]})
    return EXIT_OK


def cmd_contract(args) -> int:
    H = _read_hypergraph(args.hypergraph)
    _, w_hat = min_cut(H)
    masks = contraction_trials(H, args.alpha, args.trials, args.seed)
    uniq, counts = np.unique(masks, return_counts=True)
    weights = cut_weights(H, uniq)
    limit = args.alpha * w_hat * (1 + CUT_RTOL) + CUT_RTOL
    table = {Cut.from_mask(H.n, int(mk)).bitstring(): int(c) for mk, c in zip(uniq, counts)}
    near = [
        {"side": Cut.from_mask(H.n, int(mk)).bitstring(), "weight": float(w)}
        for mk, w in sorted(zip(uniq.tolist(), weights.tolist()), key=lambda p: (p[1], p[0]))
        if w <= limit
    ]
    if args.json:
        _emit({"distinct_cuts": near, "min_weight": w_hat, "frequency_table": table})
    else:
        print(f"min cut {w_hat:g}; {len(near)} distinct cuts <= {args.alpha:g} x min over {args.trials} trials")
        for row in near:
            print(f"  {row['side']}  weight {row['weight']:g}  seen {table[row['side']]}")
    return EXIT_OK


def cmd_sunflower(args) -> int:
    _write_text(args.out, serialize_hypergraph(sunflower(args.r, args.m, args.alpha)))
    return EXIT_OK


def cmd_sparsify(args) -> int:
    H = _read_hypergraph(args.hypergraph)
    params = SparsifyParams(args.epsilon, args.d, args.seed, log_offset=args.log_offset)
    sparse, report = sparsify(H, params)
    _write_text(args.out, serialize_hypergraph(sparse))
    if args.verify:
        checked = verify_sparsifier(H, sparse, args.epsilon)
        report = type(report)(report.edge_count, checked.max_relative_cut_error, report.expected_edge_count, args.epsilon)
        _emit(report.to_dict())
    return EXIT_OK


def _stdin_edges(stream):
    for no, line in enumerate(stream, start=1):
        toks = line.split()
        if not toks:
            continue
        try:
            w, k = float(toks[0]), int(toks[1])
            verts = [int(t) for t in toks[2:]]
        except (ValueError, IndexError):
            raise StreamError(f"line {no}: malformed edge line") from None
        if len(verts) != k:
            raise StreamError(f"line {no}: edge declares {k} endpoints but lists {len(verts)}")
        yield (verts, w)


def cmd_stream_sparsify(args) -> int:
    params = SparsifyParams(args.epsilon, args.d, args.seed)
    out = streaming_sparsify(
        _stdin_edges(sys.stdin), args.n, params, r=args.r, expected_edges=args.expected_edges
    )
    _write_text(args.out, serialize_hypergraph(out))
    return EXIT_OK


def cmd_sat_sketch(args) -> int:
    phi = parse_dimacs(Path(args.cnf).read_text(encoding="utf-8"))
    sk = sketch_formula(phi, args.epsilon, args.d, args.seed)
    Path(args.out).write_text(sk.dumps(), encoding="utf-8")
    _emit({"num_vars": phi.num_vars, "clauses": phi.m, **sk.report.to_dict()})
    return EXIT_OK


def cmd_sat_eval(args) -> int:
    sk = load_sketch(Path(args.sketch).read_text(encoding="utf-8"))
    bits = args.assignment.strip()
    if set(bits) - {"0", "1"}:
        raise InvalidArgumentError("assignment must be a string of 0/1 characters")
    _emit({"estimate": estimate_value(sk, [c == "1" for c in bits])})
    return EXIT_OK


def cmd_gadget(args) -> int:
    inst = gen_bhh(args.k, args.t, args.b, np.random.default_rng(args.seed))
    g = build_gadget(inst)
    payload = {
        **g.to_dict(),
        "maxcut": exact_max_cut(g.graph),
        "expected": gadget_expected_value(inst.n, inst.t, inst.b),
        "cycle_lengths": cycle_lengths(g.graph),
        "instance": {"x": list(inst.x), "M": [list(e) for e in inst.M], "w": list(inst.w), "b": inst.b},
    }
    if args.json:
        _emit(payload)
    else:
        print(f"n={inst.n} t={inst.t} b={inst.b}: max cut {payload['maxcut']:g}, expected {payload['expected']}")
    return EXIT_OK


def cmd_two_party(args) -> int:
    G = _read_hypergraph(args.graph)
    if G.rank > 2:
        raise InvalidArgumentError("two-party protocol expects a graph (edge cardinality <= 2)")
    seed = args.seed if args.split_seed is None else args.split_seed
    split = np.random.default_rng(seed).integers(0, 2, size=G.m)
    EA = G.with_edges(e for e, s in zip(G.edges, split) if s == 0)
    EB = G.with_edges(e for e, s in zip(G.edges, split) if s == 1)
    _emit(two_party_values(EA, EB, G.n))
    return EXIT_OK


def _parse_param(text: str) -> tuple[str, object]:
    key, sep, raw = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key, json.loads(raw)
    except json.JSONDecodeError:
        return key, raw


def cmd_experiment(args) -> int:
    report = run_experiment(args.name, dict(args.param or []), args.seed)
    print(report.to_json(timing=not args.no_timing))
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypersketch", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    parser.add_argument("-v", "--verbose", action="store_true")
    # repeated on subcommands without defaults, so a global value is not overwritten
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mincut", parents=[common], help="minimum cut of a hypergraph")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--method", choices=["ordering", "contraction"], default="ordering")
    p.set_defaults(func=cmd_mincut)

    p = sub.add_parser("strength", parents=[common], help="per-edge strong connectivity")
    p.add_argument("--hypergraph", required=True)
    p.set_defaults(func=cmd_strength)

    p = sub.add_parser("contract", parents=[common], help="near-minimum cuts by random contraction")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_contract)

    p = sub.add_parser("sunflower", parents=[common], help="emit the sunflower lower-bound hypergraph")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sunflower)

    p = sub.add_parser("sparsify", parents=[common], help="sample a cut sparsifier")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--log-offset", type=float, default=2.0, help="additive constant c in (d + c) ln n")
    p.add_argument("--out", required=True)
    p.add_argument("--verify", action="store_true", help="exhaustively check all cuts (n <= 20)")
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("stream-sparsify", parents=[common], help="sparsify an edge stream read from stdin")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--r", type=int, help="largest edge cardinality in the stream (default n)")
    p.add_argument("--expected-edges", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stream_sparsify)

    p = sub.add_parser("sat-sketch", parents=[common], help="sketch a DIMACS CNF formula")
    p.add_argument("--cnf", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sat_sketch)

    p = sub.add_parser("sat-eval", parents=[common], help="estimate an assignment's value from a sketch")
    p.add_argument("--sketch", required=True)
    p.add_argument("--assignment", required=True, help="bitstring, character i is variable i+1")
    p.set_defaults(func=cmd_sat_eval)

    p = sub.add_parser("gadget", parents=[common], help="build a Max-Cut reduction gadget")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--b", type=int, choices=[0, 1], required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("two-party", parents=[common], help="two-party 2/3 Max-Cut protocol on a random edge split")
    p.add_argument("--graph", required=True)
    p.add_argument("--split-seed", type=int)
    p.set_defaults(func=cmd_two_party)

    p = sub.add_parser("experiment", parents=[common], help="run a named acceptance experiment")
    p.add_argument("name", help=", ".join(EXPERIMENTS))
    p.add_argument("--param", action="append", type=_parse_param, metavar="KEY=VALUE")
    p.add_argument("--no-timing", action="store_true", help="omit wall_time_ms for byte-stable output")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        log.error("%s", exc)
        return EXIT_RESOURCE
    except UnknownExperimentError as exc:
        log.error("unknown experiment %s (choose from %s)", exc, ", ".join(EXPERIMENTS))
        return EXIT_USAGE
    except (InvalidArgumentError, ParseError, StreamError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
