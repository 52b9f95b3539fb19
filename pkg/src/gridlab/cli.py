"""Command-line front end: one JSON document per invocation on stdout.

Output is byte-identical across runs and worker counts: numeric counts are
decimal strings (safe for exact big naturals), floats are serialized with
nine significant digits, and volatile diagnostics (timing, worker count) go
to stderr only.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import counting, loss, oracle, rauzy, solver
from .errors import GridLabError
from .parallel import default_threads
from .problems import get_problem


def _fmt_float(x):
    return f"{x:.9g}"


def _emit(doc):
    sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def _result(command, params, status="ok", **payload):
    return {"command": command, "params": params, "status": status, **payload}


def _parser():
    p = argparse.ArgumentParser(
        prog="grid-domino-lab",
        description="Domination numbers, loss bounds and dominating-set "
                    "counts on grid graphs.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n=False, m=False, height=False, order=False, maxnm=False):
        sp.add_argument("--problem", required=True)
        if n:
            sp.add_argument("-n", type=int, required=True)
        if m:
            sp.add_argument("-m", type=int, required=True)
        if height:
            sp.add_argument("--height", type=int, default=None)
        if order:
            sp.add_argument("--order", type=int, default=None)
        if maxnm:
            sp.add_argument("--max-n", type=int, required=True)
            sp.add_argument("--max-m", type=int, required=True)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--state-cache", default=None)
        sp.add_argument("--json", action="store_true", default=True)

    common(sub.add_parser("solve"), n=True, m=True)
    common(sub.add_parser("formula"), n=True)
    common(sub.add_parser("recurrence"), n=True)
    common(sub.add_parser("loss-bound"), n=True, m=True, height=True)
    sub.choices["loss-bound"].add_argument("--extended", action="store_true")
    common(sub.add_parser("count"), n=True, m=True)
    common(sub.add_parser("growth"), n=True)
    common(sub.add_parser("rauzy"), order=True)
    common(sub.add_parser("verify"), maxnm=True)
    common(sub.add_parser("oracle"), n=True, m=True)
    sub.choices["oracle"].add_argument("--count", action="store_true")
    return p


def _params(args, keys):
    out = {"problem": args.problem}
    for k in keys:
        out[k] = getattr(args, k.replace("-", "_"))
    return out


def _cmd_solve(args):
    spec = get_problem(args.problem)
    n, m = args.n, args.m
    params = {"problem": args.problem, "n": n, "m": m}
    hn, hm = (n, m) if n <= m else (m, n)
    sys_ = solver.build_system(spec, hn, threads=args.threads,
                               cache_dir=args.state_cache)
    value = solver.gamma(spec, hn, hm, system=sys_)
    if value is None:
        return _result("solve", params, status="infeasible")
    return _result("solve", params, value=value)


def _cmd_recurrence(args):
    spec = get_problem(args.problem)
    params = {"problem": args.problem, "n": args.n}
    sys_ = solver.build_system(spec, args.n, threads=args.threads,
                               cache_dir=args.state_cache)
    rec = solver.find_recurrence(spec, args.n, system=sys_)
    return _result("recurrence", params, start=rec.start, period=rec.period,
                   increment=rec.increment)


def _cmd_formula(args):
    spec = get_problem(args.problem)
    params = {"problem": args.problem, "n": args.n}
    sys_ = solver.build_system(spec, args.n, threads=args.threads,
                               cache_dir=args.state_cache)
    rec = solver.find_recurrence(spec, args.n, system=sys_)
    vals = solver.gamma_range(spec, args.n, rec.start + rec.period, system=sys_)
    values = {i + 1: v for i, v in enumerate(vals)}
    formula = solver.synthesize_formula(rec, values, args.n)
    return _result("formula", params, formula=formula.as_dict())


def _cmd_loss_bound(args):
    spec = get_problem(args.problem)
    h = args.height if args.height is not None else 6
    params = {"problem": args.problem, "n": args.n, "m": args.m, "height": h,
              "extended": bool(args.extended)}
    if args.extended:
        value = loss.extended_lower_bound(spec, args.n, args.m, h)
    else:
        value = loss.lower_bound(spec, args.n, args.m, h)
    return _result("loss-bound", params, value=value)


def _cmd_count(args):
    params = {"problem": args.problem, "n": args.n, "m": args.m}
    res = counting.count_sets(args.problem, args.n, args.m)
    return _result("count", params, count=str(res.count))


def _cmd_growth(args):
    params = {"problem": args.problem, "n": args.n}
    br = counting.growth_bounds(args.problem, args.n)
    return _result(
        "growth", params,
        lower=_fmt_float(br.lower), upper=_fmt_float(br.upper),
        ratio_estimate=_fmt_float(br.ratio_estimate) if br.ratio_estimate else None,
        uncertified=True,
    )


def _cmd_rauzy(args):
    params = {"problem": args.problem, "order": args.order}
    if args.order is None:
        lam, order, hist = rauzy.stabilized_growth(args.problem)
        return _result("rauzy", params, growth=_fmt_float(lam), order=order,
                       history=[_fmt_float(x) for x in hist])
    lam = rauzy.growth_rate(get_problem(args.problem), args.order)
    return _result("rauzy", params, growth=_fmt_float(lam))


def _cmd_verify(args):
    spec = get_problem(args.problem)
    params = {"problem": args.problem, "max_n": args.max_n, "max_m": args.max_m}
    mismatches = 0
    checked = 0
    for n in range(1, args.max_n + 1):
        sys_ = solver.build_system(spec, n, threads=args.threads,
                                   cache_dir=args.state_cache)
        vals = solver.gamma_range(spec, n, args.max_m, system=sys_)
        for m in range(n, args.max_m + 1):
            try:
                want = solver.reference_formula(args.problem, n, m)
            except GridLabError:
                continue
            checked += 1
            if vals[m - 1] != want:
                mismatches += 1
    return _result("verify", params, checked=checked, mismatches=mismatches)


def _cmd_oracle(args):
    params = {"problem": args.problem, "n": args.n, "m": args.m,
              "count": bool(args.count)}
    if args.count:
        return _result("oracle", params,
                       count=str(oracle.brute_count(args.problem, args.n, args.m)))
    value = oracle.brute_min_cost(args.problem, args.n, args.m)
    if value is None:
        return _result("oracle", params, status="infeasible")
    return _result("oracle", params, value=value)


_HANDLERS = {
    "solve": _cmd_solve,
    "formula": _cmd_formula,
    "recurrence": _cmd_recurrence,
    "loss-bound": _cmd_loss_bound,
    "count": _cmd_count,
    "growth": _cmd_growth,
    "rauzy": _cmd_rauzy,
    "verify": _cmd_verify,
    "oracle": _cmd_oracle,
}


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.threads is None:
        args.threads = default_threads()
    t0 = time.time()
    try:
        doc = _HANDLERS[args.command](args)
    except GridLabError as exc:
        _emit(_result(args.command, {"problem": getattr(args, "problem", None)},
                      status="error", error=type(exc).__name__, detail=str(exc)))
        return 0
    _emit(doc)
    print(f"[grid-domino-lab] {args.command} finished in {time.time()-t0:.2f}s "
          f"using {args.threads} worker(s)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
