"""Command-line front end: ``commgraph <subcommand> ...``.

Exit codes: 0 success, 1 domain or usage error, 2 budget refusal.
Machine output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .classifier import TABLE_NS, TABLE_PS, classify, render_table
from .errors import BudgetExceeded, CommGraphError
from .graph import Budget, default_threads, distance_at_most_2, ff_graph_summary
from .localfields import explain_lines
from .matrix import SquareMatrix

GLYPH_LEGEND = (
    "table glyphs: X disconnected; 4/5/6 exact diameter; ≤5 diameter in {4,5}; "
    "≥5 diameter in {5,6}; ? diameter in {4,5,6}"
)

EXIT_OK, EXIT_DOMAIN, EXIT_BUDGET = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True)


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_classify(args, out):
    v = classify(args.p, args.n, disabled=args.disable or ())
    if args.json:
        print(_dump(v.to_json()), file=out)
        return EXIT_OK
    if v.connected:
        print(f"Γ(Q_{v.p},{v.n}) connected; diameter in [{v.lo},{v.hi}] ({v.glyph})", file=out)
    else:
        print(f"Γ(Q_{v.p},{v.n}) disconnected; {v.nonclique_note}", file=out)
    if args.explain:
        for t in v.trace:
            bounds = "" if t.lo is None else f" [{t.lo},{t.hi}]"
            print(f"  {t.rule}{bounds}: {t.detail} -- {t.citation}", file=out)
    return EXIT_OK


def cmd_explain(args, out):
    for line in explain_lines(args.p, args.n):
        print(line, file=out)
    v = classify(args.p, args.n)
    for t in v.trace:
        bounds = "" if t.lo is None else f" [{t.lo},{t.hi}]"
        print(f"{t.rule}{bounds}: {t.detail}", file=out)
    print(f"verdict: {v.glyph}", file=out)
    return EXIT_OK


def cmd_table(args, out):
    out.write(render_table(args.n, args.p, args.format))
    return EXIT_OK


def cmd_ff_diameter(args, out):
    budget = Budget(max_vertices=args.max_vertices, threads=args.threads)
    s = ff_graph_summary(args.p, args.n, budget)
    if args.json:
        print(_dump(s.to_json(timing=args.timing)), file=out)
    else:
        diam = "inf (disconnected)" if not s.connected else str(int(s.diameter))
        print(f"Γ(F_{s.p},{s.n}): {s.vertex_count} vertices, {s.class_count} commutant classes, "
              f"{s.component_count} components, diameter {diam}", file=out)
        if args.timing:
            print(f"wall time {s.wall_time:.2f}s", file=out)
    return EXIT_OK


def cmd_witness(args, out):
    from .witness import build_bundle, check_U, distance_lower_probe, noncommutation_probe, random_frame_nonderogatory

    rational = args.char == 0
    b = build_bundle(args.char, args.q, seed=args.seed, rational=rational)
    checks = check_U(b.C, b.U)
    probe = noncommutation_probe(b, trials=args.trials, seed=args.seed, threads=args.threads)
    A = random_frame_nonderogatory(b, seed=args.seed)
    dist = distance_lower_probe(b, A)
    report = {
        "field": b.field.descriptor,
        "q": b.q,
        "seed": args.seed,
        "m": repr(b.data.m),
        "U": b.U.to_json(),
        "U_checks": {
            "invertible": checks.invertible,
            "power_scalar": checks.power_scalar,
            "one_plus_invertible": checks.one_plus_invertible,
            "direct_sum_rank": checks.direct_sum_rank,
        },
        "S_invertible": b.S.is_invertible(),
        "noncommutation_probe": probe.to_json(),
        "distance_lower_probe": dist.to_json(),
    }
    if args.json:
        print(_dump(report), file=out)
    else:
        print(f"K = {b.field.descriptor}[C], m = {report['m']}", file=out)
        print(f"U checks: {report['U_checks']}", file=out)
        print(f"non-commutation probe: {probe.commuting_pairs} commuting pairs in {probe.trials} trials", file=out)
        print(f"joint commutant of (A1, S^-1 A1 S): dimension {dist.joint_commutant_dim}", file=out)
    return EXIT_OK if probe.commuting_pairs == 0 else EXIT_DOMAIN


def cmd_reduce_chain(args, out):
    from .graph import verify_chain
    from .witness import reduce_chain

    data = _load_json(args.file)
    if not isinstance(data, list):
        print("chain JSON must be an array of matrices", file=sys.stderr)
        return EXIT_DOMAIN
    chain = [SquareMatrix.from_json(m) for m in data]
    red = reduce_chain(chain, args.p)
    check = verify_chain(red)
    if not check:
        print(f"reduced chain invalid at {check.failure_index}: {check.reason}", file=sys.stderr)
        return EXIT_DOMAIN
    print(_dump([m.to_json() for m in red]), file=out)
    return EXIT_OK


def cmd_dist2(args, out):
    A = SquareMatrix.from_json(_load_json(args.file_a))
    B = SquareMatrix.from_json(_load_json(args.file_b))
    res = distance_at_most_2(A, B)
    if args.json:
        print(_dump({"distance_at_most_2": res}), file=out)
    else:
        print("true" if res else "false", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="commgraph", description="Commuting graphs of matrix rings over Q_p and F_p.",
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"commgraph {__version__}\n{GLYPH_LEGEND}")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $COMMGRAPH_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="diameter bounds for Γ(Q_p, n)")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--explain", action="store_true", help="print the rule trace")
    p.add_argument("--disable", action="append", choices=["R2", "R3", "R4", "R5", "R6", "R7"])
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("explain", help="every predicate evaluated at (p, n)")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("table", help="grid of diameter glyphs")
    p.add_argument("--n", type=_int_list, default=list(TABLE_NS))
    p.add_argument("--p", type=_int_list, default=list(TABLE_PS))
    p.add_argument("--format", choices=["markdown", "tex", "json"], default="markdown")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("ff-diameter", help="exhaustive Γ(F_p, n)")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--max-vertices", type=int, default=Budget().max_vertices)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    p.set_defaults(func=cmd_ff_diameter)

    p = sub.add_parser("witness", help="twist matrix U, S and the non-commutation probes")
    p.add_argument("--char", type=int, default=3, help="odd prime, or 0 for the degree-7 subfield of Q(ζ_29)")
    p.add_argument("--q", type=int, default=7)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("reduce-chain", help="reduce a commuting chain over Q modulo p")
    p.add_argument("file")
    p.add_argument("-p", type=int, required=True)
    p.set_defaults(func=cmd_reduce_chain)

    p = sub.add_parser("dist2", help="is d(A, B) <= 2?")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dist2)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = default_threads()
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CommGraphError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
