"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 budget exceeded or result
unknown, 3 internal invariant failure.

JSON output carries ``"schema": "tourpart/1"``; integers that may exceed
64 bits are decimal strings.  CSV columns, in order:

  analyze    vertex,part,d_plus,d_minus
  count      vertex,t_plus,t_minus,f_plus,f_minus
  enumerate  status,total,visited,omega_sum,strong_partitions,min_omega,max_omega,first_strong
  check      condition,lhs,rhs,verdict
  search     found,restarts,moves_evaluated,best_nonstrong,best_deficiency,partition_index
  tables     (cr) r,C,published,verdict_at_C,verdict_before
             (pc) c,binomial,rhs,published,discrepancy,verdict
             (f)  c_lo,c_hi,max_upper,verdict
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import bounds
from .counting import omega_exact, threshold_for
from .gen import KINDS, GenSpec, generate
from .mpt import MptError, degree_profile, irregularity, parse, serialize
from .partitions import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    count_partitions,
    find_strong_partition_exhaustive,
    partition_at,
    partition_index,
    scan,
)
from .search import SearchParams, find_strong_partition_local

SCHEMA = "tourpart/1"

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3


class InvariantFailure(RuntimeError):
    pass


class Report:
    def __init__(self, command: str, payload: dict, columns: list[str], rows: list[dict], status: int = EXIT_OK):
        self.command = command
        self.payload = payload
        self.columns = columns
        self.rows = rows
        self.status = status

    def render(self, fmt: str, color: bool) -> str:
        if fmt == "json":
            return json.dumps({"schema": SCHEMA, "command": self.command, **self.payload}, indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.DictWriter(buf, self.columns, extrasaction="ignore", lineterminator="\n")
            w.writeheader()
            w.writerows(self.rows)
            return buf.getvalue()
        return _table(self.columns, self.rows, color)


_COLORS = {"guaranteed": 32, "holds": 32, "all negative": 32, "found": 32,
           "fails": 31, "none": 31, "hypothesis-fails": 33, "borderline": 33, "unknown": 33}


def _table(columns, rows, color):
    cells = [[("" if row.get(k) is None else str(row.get(k))) for k in columns] for row in rows]
    widths = [max([len(k)] + [len(r[i]) for r in cells]) for i, k in enumerate(columns)]
    out = ["  ".join(k.ljust(w) for k, w in zip(columns, widths)).rstrip()]
    out.append("  ".join("-" * w for w in widths))
    for r in cells:
        parts = []
        for v, w in zip(r, widths):
            pad = v.ljust(w)
            if color and v in _COLORS:
                pad = f"\x1b[{_COLORS[v]}m{v}\x1b[0m" + " " * (w - len(v))
            parts.append(pad)
        out.append("  ".join(parts).rstrip())
    return "\n".join(out) + "\n"


def _approx(q) -> str | None:
    if q is None:
        return None
    return f"{q.mid:.6g}"


# input handling


def load_instance(args):
    if args.input and args.gen:
        raise MptError("give either --input or --gen, not both")
    if args.input:
        try:
            text = Path(args.input).read_text() if args.input != "-" else sys.stdin.read()
        except OSError as e:
            raise MptError(f"cannot read {args.input}: {e.strerror}") from None
        return parse(text)
    if args.gen:
        if args.r is None or args.c is None:
            raise MptError("--gen needs --r and --c")
        try:
            return generate(GenSpec(args.gen, args.r, args.c, args.seed))
        except ValueError as e:
            raise MptError(str(e)) from None
    raise MptError("no input: give --input FILE or --gen KIND --r N --c N")


# commands


def cmd_gen(args):
    inst = load_instance(args)
    text = serialize(inst)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return None


def cmd_analyze(args):
    inst = load_instance(args)
    irr = irregularity(inst)
    rows = []
    for x in range(inst.n):
        d = degree_profile(inst, x)
        rows.append({"vertex": x, "part": d.part, "d_plus": d.d_plus, "d_minus": d.d_minus})
    payload = {"r": inst.r, "c": inst.c, "irregularity": irr.to_json(), "vertices": rows}
    return Report("analyze", payload, ["vertex", "part", "d_plus", "d_minus"], rows)


def cmd_count(args):
    inst = load_instance(args)
    rep = omega_exact(inst, threshold_for(inst.c, args.threshold))
    payload = rep.to_json()
    return Report("count", payload, ["vertex", "t_plus", "t_minus", "f_plus", "f_minus"], payload["vertices"])


def cmd_enumerate(args):
    inst = load_instance(args)
    total = count_partitions(inst.r, inst.c)
    q = threshold_for(inst.c, args.threshold)
    if total <= args.budget:
        agg = scan(inst, threads=args.threads, threshold=q)
        status = "found" if agg.first_strong is not None else "none"
        payload = {"status": status, "total": str(total), "threshold": q, "aggregate": agg.to_json()}
        if agg.first_strong is not None:
            payload["partition"] = partition_at(inst, agg.first_strong).to_json()
        code = EXIT_OK
    else:
        res = find_strong_partition_exhaustive(inst, args.budget, args.threads)
        payload = {"status": res.status, "total": str(total), "threshold": q, "aggregate": None,
                   "visited": str(res.visited)}
        if res.partition is not None:
            payload["partition"] = res.partition.to_json()
        code = EXIT_OK if res.status == "found" else EXIT_BUDGET
    agg_json = payload.get("aggregate") or {}
    row = {"status": payload["status"], "total": payload["total"],
           "visited": agg_json.get("visited", payload.get("visited")), **{k: v for k, v in agg_json.items() if k != "visited"}}
    cols = ["status", "total", "visited", "omega_sum", "strong_partitions", "min_omega", "max_omega", "first_strong"]
    return Report("enumerate", payload, cols, [row], code)


def cmd_check(args):
    inst = load_instance(args)
    thm = bounds.theorem_check(inst, args.threshold)
    cor = bounds.corollary1_check(inst, args.precision)
    payload = {"theorem": thm.to_json(), "corollary1": cor.to_json()}
    rows = [
        {"condition": "theorem", "lhs": f"{float(thm.lhs):.6g}", "rhs": None if thm.rhs is None else f"{float(thm.rhs):.6g}",
         "verdict": thm.verdict},
        {"condition": "corollary1", "lhs": _approx(cor.lhs), "rhs": _approx(cor.rhs), "verdict": cor.verdict},
    ]
    code = EXIT_OK
    if "guaranteed" in (thm.verdict, cor.verdict):
        total = count_partitions(inst.r, inst.c)
        if total <= args.budget:
            res = find_strong_partition_exhaustive(inst, args.budget, args.threads)
            payload["exhaustive"] = res.to_json()
            if res.status != "found":
                raise InvariantFailure("sufficient condition reported 'guaranteed' but no strong partition exists")
    return Report("check", payload, ["condition", "lhs", "rhs", "verdict"], rows, code)


def cmd_search(args):
    inst = load_instance(args)
    params = SearchParams(seed=args.search_seed, max_restarts=args.restarts, max_moves=args.moves,
                          tabu_length=args.tabu, threads=args.threads)
    out = find_strong_partition_local(inst, params)
    payload = out.to_json()
    row = {"found": payload["found"], "restarts": out.restarts, "moves_evaluated": out.moves_evaluated,
           "best_nonstrong": out.best_objective[0], "best_deficiency": out.best_objective[1],
           "partition_index": None if out.found is None else str(partition_index(out.found, inst.r, inst.c))}
    cols = ["found", "restarts", "moves_evaluated", "best_nonstrong", "best_deficiency", "partition_index"]
    return Report("search", payload, cols, [row], EXIT_OK if out.found else EXIT_BUDGET)


def cmd_tables(args):
    prec = args.precision
    if args.which == "cr":
        rows = []
        for row in bounds.c_table(prec=prec):
            rows.append({"r": row["r"], "C": row["C"], "published": row["published"],
                         "rhs_at_C": row["rhs_at_C"].to_json(), "verdict_at_C": row["verdict_at_C"],
                         "verdict_before": row["verdict_before"]})
        return Report("tables", {"which": "cr", "rows": rows},
                      ["r", "C", "published", "verdict_at_C", "verdict_before"], rows)
    if args.which == "pc":
        rows = []
        for rep in bounds.pc_table(prec=prec):
            rows.append({"c": int(rep.name[2:-1]), "binomial": str(rep.lhs.lo), "rhs": rep.data["rhs_approx"],
                         "published": rep.data.get("published"), "discrepancy": rep.data.get("discrepancy"),
                         "verdict": rep.verdict, "report": rep.to_json()})
        return Report("tables", {"which": "pc", "rows": rows},
                      ["c", "binomial", "rhs", "published", "discrepancy", "verdict"], rows)
    rep = bounds.f_sign_scan(args.c_lo, args.c_hi, prec=prec)
    row = {"c_lo": args.c_lo, "c_hi": args.c_hi, "max_upper": rep.lhs.to_json()["hi"], "verdict": rep.verdict}
    return Report("tables", {"which": "f", "report": rep.to_json(), **row}, ["c_lo", "c_hi", "max_upper", "verdict"], [row])


# argument parsing


def _positive(v: str) -> int:
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _nonneg(v: str) -> int:
    n = int(v)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _precision(v: str) -> int:
    n = int(v)
    if n < 128:
        raise argparse.ArgumentTypeError("precision must be at least 128 bits")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--input", metavar="FILE", help=".mpt file ('-' for stdin)")
    src.add_argument("--gen", choices=KINDS, help="generate an instance instead")
    src.add_argument("--r", type=_positive, help="part size")
    src.add_argument("--c", type=_positive, help="number of parts")
    src.add_argument("--seed", type=_nonneg, default=0)
    opts = common.add_argument_group("options")
    opts.add_argument("--format", choices=("json", "csv", "table"), default="json")
    opts.add_argument("--threads", type=_positive, default=1)
    opts.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="max partitions to enumerate")
    opts.add_argument("--precision", type=_precision, default=bounds.DEFAULT_PREC, help="interval working bits")
    opts.add_argument("--threshold", choices=("floor", "ceil"), default="floor",
                      help="rounding of (c-2)/4 for the low-degree threshold")

    p = argparse.ArgumentParser(prog="tourpart", description="Strong partitions of balanced multipartite tournaments.")
    sub = p.add_subparsers(dest="command", required=True)
    g = sub.add_parser("gen", parents=[common], help="write a generated instance as .mpt")
    g.add_argument("--output", "-o", metavar="FILE")
    g.set_defaults(func=cmd_gen)
    sub.add_parser("analyze", parents=[common], help="degree and irregularity report").set_defaults(func=cmd_analyze)
    sub.add_parser("count", parents=[common], help="exact omega via generating functions").set_defaults(func=cmd_count)
    sub.add_parser("enumerate", parents=[common], help="exhaustive partition scan").set_defaults(func=cmd_enumerate)
    sub.add_parser("check", parents=[common], help="evaluate the sufficient conditions").set_defaults(func=cmd_check)
    s = sub.add_parser("search", parents=[common], help="local search for a strong partition")
    s.add_argument("--search-seed", type=_nonneg, default=0)
    s.add_argument("--restarts", type=_nonneg, default=SearchParams.max_restarts)
    s.add_argument("--moves", type=_nonneg, default=SearchParams.max_moves)
    s.add_argument("--tabu", type=_nonneg, default=SearchParams.tabu_length)
    s.set_defaults(func=cmd_search)
    t = sub.add_parser("tables", parents=[common], help="reproduce the numeric tables")
    t.add_argument("--which", choices=("cr", "pc", "f"), default="cr")
    t.add_argument("--c-lo", type=int, default=10)
    t.add_argument("--c-hi", type=int, default=10_000)
    t.set_defaults(func=cmd_tables)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = args.func(args)
    except (MptError, ValueError) as e:
        print(f"tourpart: invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as e:
        print(f"tourpart: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvariantFailure, AssertionError) as e:
        print(f"tourpart: invariant failure: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    if rep is None:
        return EXIT_OK
    color = args.format == "table" and "NO_COLOR" not in os.environ and sys.stdout.isatty()
    sys.stdout.write(rep.render(args.format, color))
    return rep.status


if __name__ == "__main__":
    sys.exit(main())
