"""``poset-dim-lab`` command line.

Exit status: 0 on success, 2 on bad input, 3 when a search budget ran out
(the report is still written, flagged as a bound).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .bounds import SCHEMA, eval_bounds
from .dimension import dim_upper_via_matching, exact_dimension
from .errors import DomainError, InputError
from .experiments import KINDS, ExperimentConfig, run_experiment, stability_snapshot
from .glr import construct_glr, loads_glr_csv, max_glr_depth, parse_glr_csv, validate_glr
from .metrics import (balanced_clique_number, balanced_independence_number, defect,
                      max_incomparability_matching, min_maximal_matching, standard_example_greedy,
                      standard_example_number)
from .poset import SampleConfig, dumps_posetb, loads_posetb, sample_poset

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3


class _Exhausted(Exception):
    """Raised after output is written when a budget ran out."""


def _p_from(args) -> float:
    if args.p is not None and args.q is not None:
        raise InputError("give --p or --q, not both")
    if args.p is None and args.q is None:
        raise InputError("one of --p or --q is required")
    return args.p if args.p is not None else 1.0 - args.q


def _poset(args):
    if getattr(args, "input", None):
        return loads_posetb(Path(args.input).read_text())
    if args.n is None:
        raise InputError("give --input FILE or --n with --p/--q")
    return sample_poset(SampleConfig(args.n, _p_from(args), args.seed))


def _emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(d: dict) -> str:
    return json.dumps({"schema": SCHEMA, **d}, indent=2, sort_keys=True)


def _csv_rows(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_sample(args):
    p = _p_from(args)
    P = sample_poset(SampleConfig(args.n, p, args.seed))
    if args.format == "json":
        _emit(args, _json({"kind": "sample", "n": P.n, "p": p, "seed": args.seed,
                           "rows": ["".join("1" if x else "0" for x in row) for row in P.rel.tolist()]}))
    else:
        _emit(args, dumps_posetb(P, p, args.seed))


def cmd_dim(args):
    P = _poset(args)
    if args.mode == "heuristic":
        lower, w = standard_example_greedy(P, seed=args.seed)
        upper = dim_upper_via_matching(P, trials=args.trials, mode="heuristic", seed=args.seed)
        rep = {"kind": "dim", "mode": "heuristic", "n": P.n, "lower": lower, "upper": upper,
               "optimal": lower == upper, "lower_witness": w.to_dict()}
        exhausted = False
    else:
        d, R = exact_dimension(P, node_limit=args.node_limit, time_limit=args.time_limit)
        rep = {"kind": "dim", "mode": "exact", "n": P.n, "dim": d, "optimal": R.optimal,
               "lower": R.lower_bound, "realizer": R.to_dict(P.n)}
        exhausted = not R.optimal
    if args.format == "csv":
        _emit(args, _csv_rows([["n", "mode", "value", "lower", "optimal"],
                               [P.n, rep["mode"], rep.get("dim", rep.get("upper")), rep["lower"], rep["optimal"]]]))
    else:
        _emit(args, _json(rep))
    if exhausted:
        raise _Exhausted


def cmd_metrics(args):
    P = _poset(args)
    exhausted = False
    rows = {"incomparable": P.num_incomparable(), "comparable": P.num_comparable()}
    mm = max_incomparability_matching(P)
    rows["max_matching"] = mm.size
    rows["defect"] = defect(P, range(P.n), range(P.n))
    witnesses = {"max_matching": mm.witness().to_dict()}
    if P.num_incomparable():
        mmm = min_maximal_matching(P, mode=args.mode, trials=args.trials, seed=args.seed)
        rows["min_maximal_matching"] = mmm.size
        rows["min_maximal_matching_optimal"] = mmm.optimal
        witnesses["min_maximal_matching"] = mmm.witness().to_dict()
    mode = "exact" if args.mode == "exact" else "greedy"
    for name, fn in (("bcn", balanced_clique_number), ("bin", balanced_independence_number)):
        v, w = fn(P, mode=mode, node_limit=args.node_limit)
        rows[name] = v
        witnesses[name] = w.to_dict()
        exhausted |= w.exhausted and mode == "exact"
    if args.mode == "exact":
        se, w = standard_example_number(P, budget=args.node_limit)
        exhausted |= w.exhausted
    else:
        se, w = standard_example_greedy(P, seed=args.seed)
    rows["se"] = se
    witnesses["se"] = w.to_dict()
    if args.format == "csv":
        _emit(args, _csv_rows([["metric", "value"], *[[k, v] for k, v in rows.items()]]))
    else:
        _emit(args, _json({"kind": "metrics", "n": P.n, "mode": args.mode, "values": rows,
                           "witnesses": witnesses, "exhausted": exhausted}))
    if exhausted:
        raise _Exhausted


def cmd_glr(args):
    if args.validate:
        text = Path(args.validate).read_text()
        try:
            R = loads_glr_csv(text)
            rep = {"kind": "glr-validate", "ok": True, "m": R.m, "r": R.r, "s": R.s, "violations": []}
        except DomainError:
            m, _, _, rows = parse_glr_csv(text)
            report = validate_glr(rows, m)
            rep = {"kind": "glr-validate", "ok": False, "violations": [
                {"condition": v.condition, "name": v.name, "detail": v.detail,
                 "row": None if v.row is None else v.row + 1,
                 "column": None if v.column is None else v.column + 1}
                for v in report.violations]}
        _emit(args, _json(rep))
        return
    if args.m is None or args.r is None:
        raise InputError("give --m and --r (and --s), or --validate FILE")
    if args.depth:
        res = max_glr_depth(args.m, args.r, budget=args.node_limit)
        _emit(args, _json({"kind": "glr-depth", "m": args.m, "r": args.r, "value": res.value,
                           "exhausted": res.exhausted, "counting_cap": res.counting_cap,
                           "witness": res.witness.entries.tolist() if res.witness is not None else None}))
        if res.exhausted:
            raise _Exhausted
        return
    if args.s is None:
        raise InputError("--s is required")
    R = construct_glr(args.m, args.r, args.s, seed=args.seed)
    if args.format == "json":
        _emit(args, _json({"kind": "glr", "m": R.m, "r": R.r, "s": R.s, "entries": R.entries.tolist()}))
    else:
        _emit(args, R.to_csv())


def cmd_bounds(args):
    if args.n is None:
        raise InputError("--n is required")
    rep = eval_bounds(args.n, p=args.p, q=args.q, eps=args.eps, precision=args.precision,
                      lb_constant=args.lb_constant)
    _emit(args, rep.to_csv() if args.format == "csv" else rep.to_json())


def cmd_experiment(args):
    if args.kind == "stability":
        if args.n is None:
            raise InputError("--n is required")
        rep = stability_snapshot(args.n, seed=args.seed, trials=args.trials, q=args.q)
    else:
        fields = {k: getattr(args, k) for k in ("n", "p", "q", "trials", "seed", "mode", "sigmas", "eps",
                                                 "d", "r", "m", "s") if getattr(args, k) is not None}
        if args.qs:
            fields["qs"] = tuple(args.qs)
        rep = run_experiment(args.kind, ExperimentConfig(**fields))
    _emit(args, rep.to_csv() if args.format == "csv" else rep.to_json())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="poset-dim-lab", description="Random bipartite poset dimension laboratory.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "csv")):
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=float)
        p.add_argument("--q", type=float)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=64)
        p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--out", metavar="FILE")
        p.add_argument("--eps", type=float, default=0.1)
        p.add_argument("--precision", type=int, help="decimal digits for high-precision evaluation")
        p.add_argument("--node-limit", type=int, help="search node budget")

    s = sub.add_parser("sample", help="sample a poset (text format by default)")
    common(s, formats=("text", "json"))
    s.set_defaults(func=cmd_sample)

    d = sub.add_parser("dim", help="dimension of a sampled or given poset")
    common(d)
    d.add_argument("--input", metavar="FILE", help="poset file to read instead of sampling")
    d.add_argument("--time-limit", type=float)
    d.set_defaults(func=cmd_dim)

    m = sub.add_parser("metrics", help="matchings, bcn, bin, se and defect")
    common(m)
    m.add_argument("--input", metavar="FILE")
    m.set_defaults(func=cmd_metrics)

    g = sub.add_parser("glr", help="construct, validate or chart generalized latin rectangles")
    common(g, formats=("csv", "json"))
    g.add_argument("--m", type=int)
    g.add_argument("--r", type=int)
    g.add_argument("--s", type=int)
    g.add_argument("--validate", metavar="FILE")
    g.add_argument("--depth", action="store_true", help="largest s for which an (m, r, s) GLR exists")
    g.set_defaults(func=cmd_glr)

    b = sub.add_parser("bounds", help="evaluate the closed-form dimension bounds")
    common(b)
    b.add_argument("--lb-constant", type=float, default=32)
    b.set_defaults(func=cmd_bounds)

    e = sub.add_parser("experiment", help="run a seeded Monte Carlo experiment")
    e.add_argument("kind", choices=KINDS + ("stability",))
    common(e)
    e.set_defaults(trials=100)
    e.add_argument("--d", type=int)
    e.add_argument("--r", type=int)
    e.add_argument("--m", type=int)
    e.add_argument("--s", type=int)
    e.add_argument("--sigmas", type=float)
    e.add_argument("--qs", type=float, nargs="+")
    e.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except _Exhausted:
        return EXIT_BUDGET
    except (InputError, DomainError, OSError) as exc:
        print(f"poset-dim-lab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
