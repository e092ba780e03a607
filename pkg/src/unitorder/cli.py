"""Command-line front end.

Every command prints one report on stdout, as JSON (default) or CSV.
JSON reports carry "schema": 1; exact rationals are {"num": "...", "den": "..."}
and log-space values are floats with 15 significant digits.

Exit status: 0 success, 1 an assertion or bound failed, 2 a guard or input
check refused the request.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from . import asympt, charmeasure, matrixgrp, verify
from .intmath import GuardError

SCHEMA = 1

CSV_HELP = """\
CSV layout: commands with a natural table (census, omega-table, pi-sweep,
sub-lemma, verify) print one row per item with a header; the others print
key,value rows.  Rationals appear as num/den.
"""


def rational(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def logfloat(x) -> float | str:
    if isinstance(x, str):
        return x if x == "-inf" else float(x)
    return float(mpmath.nstr(mpmath.mpf(x), 15))


# -- commands --------------------------------------------------------------------
# each returns (payload, rows); rows is a list of flat dicts for CSV, or None

def cmd_group_order(a):
    formula = matrixgrp.unitary_order(a.n, a.q)
    brute = None
    if (a.n, a.q) in matrixgrp.DEFAULT_ENUM_CASES or a.allow_large:
        brute = sum(1 for _ in matrixgrp.enumerate_group(a.n, a.q, allow_large=a.allow_large))
    return {"n": a.n, "q": a.q, "formula": formula, "brute_force": brute,
            "match": None if brute is None else brute == formula}, None


def cmd_census(a):
    c = matrixgrp.group_census(a.n, a.q, method=a.method, allow_large=a.allow_large)
    rows = [{"charpoly": repr(f), "count": k} for f, k in c.charpoly_counts.items()]
    payload = {"n": c.n, "q": c.q, "order": c.order, "mu": rational(c.mu),
               "order_histogram": {str(v): k for v, k in c.order_histogram.items()},
               "charpoly_counts": rows}
    return payload, rows


def cmd_mu(a):
    c = matrixgrp.group_census(a.n, a.q, allow_large=a.allow_large)
    return {"n": a.n, "q": a.q, "mu": rational(c.mu)}, None


def _stat_row(e):
    return {"poly": repr(e.poly), "weight": rational(e.weight),
            **{s: e.stat(s) for s in charmeasure.STATS}}


def cmd_omega_table(a):
    t = charmeasure.enumerate_omega(a.n, a.q, a.allow_large)
    rows = [_stat_row(e) for e in sorted(t.entries, key=lambda e: e.poly.key)]
    return {"n": a.n, "q": a.q, "size": len(t), "total": rational(t.total()), "entries": rows}, rows


def cmd_expect(a):
    value = charmeasure.expect_stat(a.stat, a.n, a.q)
    return {"stat": a.stat, "n": a.n, "q": a.q, "expectation": rational(value)}, None


def cmd_tail_m(a):
    value = charmeasure.tail_M(a.n, a.q, a.xi)
    bound = charmeasure.tail_bound(a.q, a.xi)
    return {"n": a.n, "q": a.q, "xi": a.xi, "probability": rational(value),
            "bound": rational(bound), "holds": value <= bound}, None


def cmd_pi_sweep(a):
    t = charmeasure.enumerate_omega(a.n, a.q, a.allow_large)
    rows, failures = [], 0
    for e in sorted(t.entries, key=lambda e: e.poly.key):
        s = charmeasure.pi_factor(e.poly)
        ok = verify.pi_structure_ok(e.poly)
        failures += not ok
        rows.append({"f": repr(s.f), "g": repr(s.g), "h": repr(s.h), "X_f": s.x_f, "X_g": s.x_g,
                     "structure_ok": ok})
    if failures:
        raise AssertionError(f"key factorization structure fails for {failures} polynomials")
    return {"n": a.n, "q": a.q, "count": len(rows), "failures": failures, "splits": rows}, rows


def cmd_sub_lemma(a):
    r = charmeasure.check_sub_lemma(a.n, a.q)
    rows = [{"f": repr(f), "ratio": rational(x), "k_only": k} for f, x, k in r.ratios]
    return {"n": a.n, "q": a.q, "applicable": len(rows), "max_ratio": rational(r.max_ratio),
            "worst": None if r.worst is None else repr(r.worst),
            "count_above_one": r.count_above_one,
            "max_ratio_k_only": None if r.max_ratio_k_only is None else rational(r.max_ratio_k_only),
            "ratios": rows}, rows


def cmd_sigma1(a):
    return {"b": a.b, "q": a.q, "sigma1": rational(asympt.sigma1(a.b, a.q))}, None


def cmd_sigma2(a):
    return {"s": a.s, "q": a.q, "sigma2": rational(asympt.sigma2(a.s, a.q))}, None


def cmd_a0(a):
    win = asympt.prime_window(a.xi, a.q)
    mode = "direct" if a.direct else "product"
    try:
        value = rational(asympt.fourier_a0(win, a.q, mode))
    except GuardError:
        if a.direct:
            raise
        value = None  # too large to hold exactly; the approximation still stands
    return {"xi": a.xi, "q": a.q, "mode": mode, "primes": len(win),
            "first_prime": win.primes[0], "last_prime": win.primes[-1],
            "a0": value, "a0_approx": logfloat(asympt.fourier_a0_approx(win, a.q)),
            "log_kappa": logfloat(win.log_kappa)}, None


def cmd_bound_report(a):
    r = asympt.sigma1_bound_report(a.b, a.xi, a.q)
    return {"b": r.b, "xi": r.xi, "q": r.q, "sigma1": rational(r.sigma1),
            "log_sigma1": logfloat(r.log_sigma1), "log_rhs": logfloat(r.log_rhs),
            "holds": r.holds}, None


def cmd_verify(a):
    ids = list(verify.CHECKS) if a.which == "all" else [int(a.which)]
    results = [verify.run_check(i, a.seed, a.samples) for i in ids]
    rows = [{"id": r.id, "status": r.status, "soft": r.soft, "title": r.title, "detail": r.detail}
            for r in results]
    hard_fail = any(not r.passed and not r.soft for r in results)
    for r in results:
        print(r.line(), file=sys.stderr)
    payload = {"seed": a.seed, "samples": a.samples, "passed": not hard_fail, "criteria": rows}
    return payload, rows


# -- plumbing --------------------------------------------------------------------

def _add_nq(p):
    p.add_argument("n", type=int)
    p.add_argument("q", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unitorder", description=__doc__.splitlines()[0],
                                     epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=verify.MC_SAMPLES)
    common.add_argument("--allow-large", action="store_true",
                        help="loosen enumeration guards (group and Omega enumeration)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, epilog=CSV_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=fn)
        return p

    _add_nq(add("group-order", cmd_group_order, "|U(n,q)| by formula and by enumeration"))
    p = add("census", cmd_census, "order statistics of U(n,q) by enumeration")
    _add_nq(p)
    p.add_argument("--method", choices=("minpoly", "naive"), default="minpoly")
    _add_nq(add("mu", cmd_mu, "exact average element order"))
    _add_nq(add("omega-table", cmd_omega_table, "Omega_n with exact weights and statistics"))
    p = add("expect", cmd_expect, "exact expectation of X, X1, X2, T or M")
    p.add_argument("stat", choices=charmeasure.STATS)
    _add_nq(p)
    p = add("tail-m", cmd_tail_m, "exact P_n(M > xi)")
    _add_nq(p)
    p.add_argument("xi", type=int)
    _add_nq(add("pi-sweep", cmd_pi_sweep, "key factorization of every f in Omega_n"))
    _add_nq(add("sub-lemma", cmd_sub_lemma, "ratio report P_n(f) / P(g) P(h)"))
    p = add("sigma1", cmd_sigma1, "distinct odd partition sum")
    p.add_argument("b", type=int)
    p.add_argument("q", type=int)
    p = add("sigma2", cmd_sigma2, "distinct partition sum")
    p.add_argument("s", type=int)
    p.add_argument("q", type=int)
    p = add("a0", cmd_a0, "mean of G over one period of the prime window")
    p.add_argument("xi", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--direct", action="store_true", help="sum over the full period")
    p = add("bound-report", cmd_bound_report, "sigma1(b) against 4 kappa q^b c_b in log space")
    p.add_argument("b", type=int)
    p.add_argument("xi", type=int)
    p.add_argument("q", type=int)
    p = add("verify", cmd_verify, "run acceptance checks ('all' or one criterion number)")
    p.add_argument("which", choices=["all"] + [str(i) for i in verify.CHECKS])
    return parser


def _csv_cell(v):
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return f"{v['num']}/{v['den']}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    return v


def render(payload: dict, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rows is not None:
        if rows:
            w.writerow(list(rows[0]))
            for r in rows:
                w.writerow([_csv_cell(v) for v in r.values()])
    else:
        w.writerow(["key", "value"])
        for k, v in payload.items():
            if k not in ("schema",):
                w.writerow([k, _csv_cell(v)])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, rows = args.func(args)
    except GuardError as exc:
        print(f"guard violation: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    payload = {"schema": SCHEMA, "command": args.command, **payload}
    sys.stdout.write(render(payload, rows, args.format))
    sys.stdout.flush()
    if args.command == "verify" and not payload["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
