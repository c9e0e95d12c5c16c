"""Command-line interface.

Subcommands:

* ``gf``          exact generating function: denominator and series
* ``verify``      four-way oracle agreement sweep over m ranges
* ``conjecture``  minimal-term-count measurement vs the predicted floor
* ``roots``       numeric root/identity/series residual checks

Exit codes are a stable contract: 0 success, 1 a verification check
failed, 2 usage or validation error.  Machine formats (json, csv) carry
rationals as "p/q" strings so exactness survives the pipe; json output
round-trips byte-identically through json.loads/json.dumps.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from mpmath import mp

from .exact import Poly
from .genfun import GenFun, SlitSpec, Weights, genfun
from .harness import ORACLE_NAMES, VerificationReport, sweep_conjecture, sweep_equivalence
from .oracles import (
    DEFAULT_DPS,
    closed_form_numeric,
    cubic_coefficients,
    cubic_roots,
    general_start_numeric,
    reduction_identity_check,
    root_series_check,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def parse_weights(text: str) -> Weights:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"weights must be a1,a2,a3 (got {text!r})")
    try:
        a1, a2, a3 = (Fraction(p.strip()) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse weights {text!r}: {exc}") from None
    return Weights(a1, a2, a3)


def parse_m_range(text: str) -> list[int]:
    """"9" -> [9]; "2..10" -> [2, 3, ..., 10]."""
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if lo > hi:
                raise ValueError
            values = list(range(lo, hi + 1))
        else:
            values = [int(text)]
    except ValueError:
        raise ValueError(f"m must be an integer or lo..hi range (got {text!r})") from None
    if any(m < 2 for m in values):
        raise ValueError("every m must be >= 2")
    return values


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2)


def _weights_dict(w: Weights) -> dict:
    return {"a1": str(w.a1), "a2": str(w.a2), "a3": str(w.a3)}


def _series_str(gf: GenFun) -> str:
    parts = []
    for n in range(gf.numerator_shift, gf.order + 1):
        c = gf.series[n]
        if c == 0:
            continue
        mag = abs(c)
        body = str(mag.numerator) if mag.denominator == 1 else f"({mag})"
        var = "z" if n == 1 else f"z^{n}"
        term = var if body == "1" else body + var
        parts.append(("-" if c < 0 else "+", term))
    if not parts:
        return "0"
    sign, term = parts[0]
    text = ("-" if sign == "-" else "") + term
    for sign, term in parts[1:]:
        text += f" {sign} {term}"
    return text


# ---------------------------------------------------------------------------
# gf
# ---------------------------------------------------------------------------

def _single_weights(args) -> Weights:
    if len(args.weights) != 1:
        raise ValueError("this command takes exactly one --weights triple")
    return parse_weights(args.weights[0])


def cmd_gf(args) -> int:
    (m,) = _single_m(args.m)
    w = _single_weights(args)
    spec = SlitSpec(m)
    order = args.order if args.order is not None else m + 15
    if order < m - 1:
        raise ValueError("order must be at least m-1")
    gf = genfun(spec, w, order)
    if args.format == "json":
        payload = {
            "schema_version": 1,
            "m": m,
            "weights": _weights_dict(w),
            "order": order,
            "numerator": {"shift": gf.numerator_shift, "scale": str(gf.numerator_scale)},
            "denominator": [
                {"exp": e, "coeff": str(c)}
                for e, c in enumerate(gf.denominator.coeffs)
                if c != 0
            ],
            "series": [
                {"exp": n, "coeff": str(gf.series[n])}
                for n in range(gf.numerator_shift, order + 1)
            ],
        }
        print(_dumps(payload))
    elif args.format == "csv":
        print("kind,exponent,coefficient")
        for e, c in enumerate(gf.denominator.coeffs):
            if c != 0:
                print(f"denominator,{e},{c}")
        for n in range(gf.numerator_shift, order + 1):
            print(f"series,{n},{gf.series[n]}")
    else:
        print(f"m = {m}, weights {w}, order = {order}")
        print(f"denominator = {gf.denominator}")
        print(f"series      = {_series_str(gf)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _report_csv(report: VerificationReport) -> str:
    lines = ["m,a1,a2,a3,check,pass,detail"]
    for inst in report.instances:
        w = inst.weights
        for c in inst.checks:
            detail = c.detail.replace(",", ";")
            lines.append(f"{inst.m},{w.a1},{w.a2},{w.a3},{c.name},{str(c.passed).lower()},{detail}")
    return "\n".join(lines)


def _print_report(report: VerificationReport, fmt: str, csv_fn) -> None:
    if fmt == "json":
        print(report.to_json())
    elif fmt == "csv":
        print(csv_fn(report))
    else:
        print(report.summary())


def cmd_verify(args) -> int:
    m_values = parse_m_range(args.m)
    weight_sets = [parse_weights(t) for t in args.weights]
    order = args.order if args.order is not None else max(m_values) + 15
    oracles = tuple(args.oracle) if args.oracle else ORACLE_NAMES
    report = sweep_equivalence(m_values, weight_sets, order, oracles)
    _print_report(report, args.format, _report_csv)
    return EXIT_OK if report.all_passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# conjecture
# ---------------------------------------------------------------------------

def _conjecture_csv(report: VerificationReport) -> str:
    lines = ["m,predicted,observed"]
    for inst in report.instances:
        c = inst.conjecture
        observed = "" if c.observed is None else c.observed
        lines.append(f"{inst.m},{c.predicted},{observed}")
    return "\n".join(lines)


def cmd_conjecture(args) -> int:
    if args.m_max < 3:
        raise ValueError("--m-max must be at least 3")
    w = parse_weights(args.weights[0]) if args.weights else Weights(1, 1, 1)
    report = sweep_conjecture(args.m_max, w)
    _print_report(report, args.format, _conjecture_csv)
    return EXIT_OK if report.all_passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# roots
# ---------------------------------------------------------------------------

def _roots_checks(args) -> list[tuple[str, bool, str]]:
    (m,) = _single_m(args.m)
    w = _single_weights(args)
    spec = SlitSpec(m)
    z, q, tol = args.z, args.q, args.tolerance
    if z <= 0:
        raise ValueError("z must be positive")
    if q <= 0:
        raise ValueError("q must be positive")
    terms = min(5, m - 2) if args.terms is None else args.terms
    if terms != 0 and not 1 <= terms <= m - 2:
        raise ValueError("terms must lie in 1..m-2")
    order = args.order if args.order is not None else m + 11
    if order < m - 1:
        raise ValueError("order must be at least m-1")

    checks: list[tuple[str, bool, str]] = []
    b0, b1, b2, b3 = cubic_coefficients(z, q, w)
    roots = cubic_roots(z, q, w)
    with mp.workdps(DEFAULT_DPS):
        rs = roots.as_tuple()
        scale = max(abs(v) for v in (b0, b1, b2, b3)) * max(1, max(abs(r) for r in rs)) ** 3
        froot = max(abs(((b0 * r + b1) * r + b2) * r + b3) for r in rs)
        checks.append(
            (
                "root_residuals",
                froot <= mp.mpf("1e-10") * scale,
                f"max |F(root)| = {mp.nstr(froot, 3)} (scale {mp.nstr(scale, 3)})",
            )
        )
        vieta = (
            abs(sum(rs) + b1 / b0) / max(1, abs(b1 / b0)),
            abs(rs[0] * rs[1] + rs[1] * rs[2] + rs[2] * rs[0] - b2 / b0) / max(1, abs(b2 / b0)),
            abs(rs[0] * rs[1] * rs[2] + b3 / b0) / max(1, abs(b3 / b0)),
        )
        checks.append(
            (
                "cubic_roots_vieta",
                max(vieta) <= mp.mpf("1e-10"),
                f"relative residuals {tuple(mp.nstr(v, 3) for v in vieta)}",
            )
        )

    gf = genfun(spec, w, order)
    try:
        closed = closed_form_numeric(z, q, spec, w)
    except ValueError as exc:
        checks.append(("closed_form_vs_series", False, f"error: {exc}"))
        return checks
    with mp.workdps(DEFAULT_DPS):
        zv = mp.mpf(z)
        partials = []
        acc = mp.mpf(0)
        for n in range(order + 1):
            c = gf.series[n]
            if c:
                acc += (mp.mpf(c.numerator) / c.denominator) * zv**n
            partials.append(acc)
        final_res = abs(closed - partials[-1])
        ok = final_res <= mp.mpf(tol) * max(1, abs(closed))
        checks.append(
            (
                "closed_form_vs_series",
                bool(ok),
                f"closed={closed:.9e} truncated={mp.nstr(partials[-1], 10)} |diff|={mp.nstr(final_res, 3)}",
            )
        )
        window = [abs(closed - p) for p in partials[-5:]]
        trend_ok = all(window[i + 1] <= window[i] for i in range(len(window) - 1))
        checks.append(
            (
                "series_residual_trend",
                trend_ok,
                "residuals shrinking"
                if trend_ok
                else f"residuals not shrinking (divergent at z={z}): {[mp.nstr(v, 3) for v in window]}",
            )
        )

    general = general_start_numeric(z, q, m - 1, spec, w)
    rel = abs(general - closed) / max(1e-300, abs(closed))
    checks.append(
        (
            "general_start_matches",
            rel <= 1e-9,
            f"general(s=m-1)={general:.9e} relative gap {rel:.2e}",
        )
    )

    if terms:  # m = 2 offers no valid truncation of the small-root series
        series_report = root_series_check(spec, w, z, terms, q=q)
        checks.append(
            (
                "small_root_series",
                series_report.strictly_decreasing,
                "residuals " + " -> ".join(f"{r:.2e}" for r in series_report.residuals),
            )
        )
        checks.append(
            (
                "large_root_expansions",
                series_report.passed,
                f"fitted q-orders {tuple(round(o, 3) for o in series_report.large_root_orders)}, "
                f"prefactor drift {series_report.prefactor_drift:.2e}",
            )
        )

    reduction = reduction_identity_check((b0, b1, b2), q)
    checks.append(
        (
            "reduction_identities",
            reduction.passed,
            f"derivative residual {max(reduction.derivative_residuals):.2e}, "
            f"fd residual {max(reduction.inverse_derivative_residuals):.2e}, "
            f"discriminant residual {reduction.discriminant_residual:.2e} "
            f"(sign {reduction.discriminant_sign:+d})",
        )
    )
    return checks


def cmd_roots(args) -> int:
    try:
        checks = _roots_checks(args)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    (m,) = _single_m(args.m)
    if args.format == "json":
        payload = {
            "schema_version": 1,
            "m": m,
            "weights": _weights_dict(parse_weights(args.weights[0])),
            "z": args.z,
            "q": args.q,
            "checks": [
                {"name": name, "pass": passed, "detail": detail}
                for name, passed, detail in checks
            ],
        }
        print(_dumps(payload))
    elif args.format == "csv":
        print("check,pass,detail")
        for name, passed, detail in checks:
            print(f"{name},{str(passed).lower()},{detail.replace(',', ';')}")
    else:
        width = max(len(name) for name, _, _ in checks)
        for name, passed, detail in checks:
            print(f"{name:<{width}}  {'PASS' if passed else 'FAIL'}  {detail}")
    return EXIT_OK if all(passed for _, passed, _ in checks) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# parser plumbing
# ---------------------------------------------------------------------------

def _single_m(text: str) -> list[int]:
    values = parse_m_range(text)
    if len(values) != 1:
        raise ValueError("this command takes a single m, not a range")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slitpath",
        description="Exact absorption generating functions for +2/+1/-1 walks "
        "between two absorbing barriers, with independent verification oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, m_help):
        p.add_argument("--m", required=True, help=m_help)
        p.add_argument(
            "--weights",
            action="append",
            required=True,
            help="step weights a1,a2,a3 (backward 1, forward 1, forward 2); "
            "integers or p/q rationals; repeatable where a sweep applies",
        )
        p.add_argument(
            "--format",
            choices=("human", "json", "csv"),
            default="human",
            help="output format (default human)",
        )

    gf = sub.add_parser("gf", help="compute the exact generating function")
    common(gf, "barrier position m (single integer >= 2)")
    gf.add_argument("--order", type=int, default=None, help="series truncation order (default m+15; must be >= m-1)")
    gf.set_defaults(func=cmd_gf)

    verify = sub.add_parser("verify", help="run the oracle agreement sweep")
    common(verify, "single m or inclusive range lo..hi")
    verify.add_argument("--order", type=int, default=None, help="series order for the sweep (default max(m)+15)")
    verify.add_argument(
        "--oracle",
        action="append",
        choices=ORACLE_NAMES,
        help="restrict to one or more oracles (default: all of matrix, enum, charpoly)",
    )
    verify.set_defaults(func=cmd_verify)

    conjecture = sub.add_parser(
        "conjecture", help="measure minimal denominator term counts up to m-max"
    )
    conjecture.add_argument("--m-max", dest="m_max", type=int, required=True, help="largest m (>= 3)")
    conjecture.add_argument(
        "--weights",
        action="append",
        help="weights a1,a2,a3 for the sweep (default 1,1,1)",
    )
    conjecture.add_argument(
        "--format",
        choices=("human", "json", "csv"),
        default="human",
        help="output format; csv columns are m,predicted,observed",
    )
    conjecture.set_defaults(func=cmd_conjecture)

    roots = sub.add_parser("roots", help="numeric root, series, and identity checks")
    common(roots, "barrier position m (single integer >= 2)")
    roots.add_argument("--z", type=float, required=True, help="evaluation point (small positive)")
    roots.add_argument("--q", type=float, default=1.0, help="auxiliary marker value (default 1)")
    roots.add_argument("--terms", type=int, default=None, help="small-root series truncations to test (default min(5, m-1))")
    roots.add_argument("--order", type=int, default=None, help="series order for the closed-form comparison (default m+11)")
    roots.add_argument("--tolerance", type=float, default=1e-6, help="pass tolerance for the closed-form comparison (default 1e-6)")
    roots.set_defaults(func=cmd_roots)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
