"""Command-line front end.

Exit codes: 0 when a result was computed (whatever the verdict), 2 for invalid
input, 3 when ``verify`` finds a claim that does not re-derive.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import LipfreeError
from .generate import KINDS, gen_instance
from .io import load_space, read_json, vector_from_json
from .report import dumps, make_report, verify_report

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _summary(report: dict) -> str:
    res = report["result"]
    cmd = report["command"]
    if cmd == "check":
        lines = [f"points: {res['n']} (base {res['base']})",
                 f"0-hyperbolic: {res['zero_hyperbolic']}"]
        if res["four_point_violation"]:
            lines.append(f"  violating quadruple: {res['four_point_violation']}")
        lines.append(f"ultrametric: {res['ultrametric']}")
        lines.append(f"diam: {res['diam']['value']} (~{res['diam']['approx']})")
        if res["sep"] is not None:
            lines.append(f"sep: {res['sep']['value']} (~{res['sep']['approx']})")
        return "\n".join(lines)
    if cmd == "realize":
        tree = res["tree"]
        lines = [f"nodes: {len(tree['nodes'])}, edges: {len(tree['edges'])}"]
        for e in tree["edges"]:
            lines.append(f"  {e['u']} -- {e['v']}  len {e['len']}")
        lines.append(f"branching nodes: {res['branching_points']}")
        lines.append(f"missing branching nodes: {res['missing_branch_points']}")
        return "\n".join(lines)
    if cmd == "norm":
        name = "free-space norm" if res["kind"] == "free" else "Lipschitz norm"
        lines = [f"{name}: {res['norm']['value']} (~{res['norm']['approx']})"]
        if res["kind"] == "free":
            lines.append("plan: " + json.dumps(res["plan"]))
            lines.append("dual certificate: " + json.dumps(res["dual"]))
        else:
            lines.append(f"attained at: {res['attained_at']}")
            if "extreme" in res:
                lines.append(f"extreme point of the dual ball: {res['extreme']}")
        return "\n".join(lines)
    if cmd == "verdict":
        lines = [f"verdict: {res['verdict']}"]
        if res["verdict"] == "NotZeroHyperbolic":
            lines.append(f"  quadruple {res['quadruple']}: {res['lhs']} > {res['rhs']}")
        elif res["verdict"] == "IsometricToL1":
            lines.append(f"  {len(res['coordinates'])} edge coordinates")
        else:
            p, d = res["primal"], res["dual"]
            lines.append(f"  missing branching nodes: {res['missing_branch_points']}")
            lines.append(f"  molecules {p['mu']} and {p['nu']} at distance {p['distance']['value']}")
            lines.append(f"  functions f, g at Lipschitz distance {d['distance']['value']}")
        return "\n".join(lines)
    if cmd == "bm":
        return "\n".join([
            f"formula bound:   {res['formula_bound']['value']} (~{res['formula_bound']['approx']})",
            f"certified bound: {res['certified_bound']['value']} (~{res['certified_bound']['approx']})",
            f"epsilon: {res['epsilon']['value']}",
            f"worst midpoint pair: {res['worst_pair']} with norm {res['worst_norm']['value']}",
        ])
    return dumps(res)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lipfree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def space_cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("space", help="space as JSON or CSV")
        p.add_argument("--base", help="override the base point label")
        p.add_argument("--json", action="store_true", help="print the full JSON report")
        p.add_argument("--out", help="write the JSON report to this file")
        return p

    space_cmd("check", "validate and compute scalar invariants")
    p = space_cmd("realize", "build the minimal containing tree")
    p.add_argument("--format", choices=("matrix", "tree"), default="tree",
                   help="tree: report JSON; matrix: tree distances between all nodes")
    p = space_cmd("norm", "free-space or Lipschitz norm")
    p.add_argument("vector", help='JSON {"coeffs": {...}} or {"values": {...}}')
    space_cmd("verdict", "decide whether F(M) is isometric to l1")
    space_cmd("bm", "Banach-Mazur lower bounds against l1^n")

    p = sub.add_parser("verify", help="re-derive every claim of a stored report")
    p.add_argument("report")

    p = sub.add_parser("gen", help="emit a random instance as JSON")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("size", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            M = gen_instance(args.kind, args.size, args.seed)
            _emit(json.dumps(M.to_json(), indent=2), args.out)
            return EXIT_OK
        if args.command == "verify":
            report = read_json(args.report)
            fails = verify_report(report)
            if fails:
                for f in fails:
                    print(f"FAIL: {f}", file=sys.stderr)
                return EXIT_VERIFY
            print(f"verified: {report.get('command')} report, all claims re-derived")
            return EXIT_OK

        M = load_space(args.space, args.base)
        vector = None
        if args.command == "norm":
            vector = vector_from_json(M, read_json(args.vector))
        report = make_report(args.command, M, vector)
        if args.command == "realize" and args.format == "matrix":
            from .tree import realize
            T = realize(M)
            ids = [nd.id for nd in T.nodes]
            names = [T.node_label(i) for i in ids]
            rows = [",".join([""] + names)]
            for i in ids:
                rows.append(",".join([names[i]] + [str(T.node_distance(i, j)) for j in ids]))
            _emit("\n".join(rows), None)
        elif args.json:
            _emit(dumps(report), None)
        else:
            print(_summary(report))
        if args.out:
            _emit(dumps(report), args.out)
        return EXIT_OK
    except (LipfreeError, FileNotFoundError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
