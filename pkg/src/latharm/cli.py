"""Command-line front end: exact sums, sweeps, fits and check reports.

Exit codes: 0 on success, 1 when a requested check fails, 2 on usage or
parse errors.  Flags beat the LH_* environment variables, which beat the
defaults.  Exact quantities are printed as rationals p/q, never decimals.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import exppairs, lattice, modular, oscsum
from .poly import DegreeCapError, Polynomial3, PolyParseError, parse_poly, sphere_average
from .util import FitResult, linear_fit

SCHEMA = 1


class CheckFailed(Exception):
    """A requested verification did not pass (exit code 1)."""


class UsageError(Exception):
    """Bad flags or unparsable input (exit code 2)."""


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"environment variable {name}={raw!r} is not an integer")


def _poly_arg(text: str) -> Polynomial3:
    try:
        return parse_poly(text)
    except (PolyParseError, DegreeCapError) as exc:
        raise UsageError(f"bad polynomial: {exc}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad rational {text!r}")


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _json_out(payload: dict) -> None:
    payload = {"schema": SCHEMA, **payload}
    print(json.dumps(payload))


# -- subcommands -------------------------------------------------------------


def cmd_sum(args) -> int:
    p = _poly_arg(args.poly)
    if args.json:
        rep = lattice.ball_sum_report(p, args.r_sq)
        _json_out(
            {"poly": p.to_string(), "r_sq": args.r_sq,
             "value": str(rep.value), "term_count": rep.term_count}
        )
    else:
        print(lattice.ball_sum(p, args.r_sq))
    return 0


def cmd_coeffs(args) -> int:
    p = _poly_arg(args.poly)
    series = lattice.coeff_series(p, args.n_max, workers=args.threads)
    if args.json:
        _json_out(
            {
                "poly": series.poly_id,
                "nu": series.nu,
                "n_max": series.n_max,
                "values": [str(v) for v in series.values],
            }
        )
    else:
        _emit(series.to_csv(), args.csv)
    return 0


def cmd_shortsum(args) -> int:
    p = _poly_arg(args.poly)
    if args.json:
        rep = lattice.short_sum_report(p, args.r, args.h)
        _json_out(
            {"poly": p.to_string(), "R": args.r, "H": args.h,
             "value": rep.value, "term_count": rep.term_count}
        )
    else:
        print(repr(lattice.short_sum(p, args.r, args.h)))
    return 0


def cmd_longsum(args) -> int:
    p = _poly_arg(args.poly)
    if args.json:
        rep = lattice.long_sum_report(p, args.r, args.h)
        _json_out(
            {"poly": p.to_string(), "R": args.r, "H": args.h,
             "value": rep.value, "term_count": rep.term_count}
        )
    else:
        print(repr(lattice.long_sum_physical(p, args.r, args.h)))
    return 0


def cmd_freqsum(args) -> int:
    p = _poly_arg(args.poly)
    value = oscsum.freq_long_sum(p, args.r, args.h, args.n_trunc)
    if args.json:
        _json_out(
            {"poly": p.to_string(), "R": args.r, "H": args.h,
             "N_trunc": args.n_trunc, "value": value}
        )
    else:
        print(repr(value))
    return 0


def _parse_h(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError("--h wants three comma-separated rationals")
    return tuple(float(_fraction(s)) for s in parts)  # type: ignore[return-value]


def cmd_expsum(args) -> int:
    q = _poly_arg(args.poly)
    h = _parse_h(args.h) if args.h else (0.0, 0.0, 0.0)
    if args.n_list:
        try:
            n_list = sorted({int(s) for s in args.n_list.split(",")})
        except ValueError:
            raise UsageError("--n-list wants comma-separated integers")
        report = oscsum.bound_check_VNQR(q, n_list, args.r, h)
        if args.json:
            _json_out(
                {
                    "poly": q.to_string(),
                    "R": args.r,
                    "rows": [
                        {"N": row.n, "abs_V": row.abs_v, "bound": row.bound,
                         "ratio": row.ratio}
                        for row in report.rows
                    ],
                    "max_ratio": report.max_ratio,
                    "slopes": {
                        k: (None if v is None else v.slope)
                        for k, v in report.slopes.items()
                    },
                }
            )
        else:
            _emit(report.to_csv(), args.csv)
        return 0
    if args.n is None:
        raise UsageError("expsum needs --n or --n-list")
    value = oscsum.exp_sum_lattice(q, args.n, h, args.r)
    if args.json:
        bound = oscsum.bound_value(args.n, q.degree, args.r)
        _json_out(
            {"poly": q.to_string(), "N": args.n, "R": args.r,
             "value_re": value.real, "value_im": value.imag,
             "bound": bound, "ratio": abs(value) / bound}
        )
    else:
        print(repr(value))
    return 0


def cmd_pair(args) -> int:
    try:
        pair = exppairs.parse_pair(args.pair, eps=args.eps)
        result = exppairs.pair_apply_word(args.word, pair) if args.word else pair
    except ValueError as exc:
        raise UsageError(str(exc))
    print(result)
    return 0


_NAMED_LONG = {
    "vdc": [exppairs.term(1, -1)],
    "classic": exppairs.long_sum_terms(exppairs.KNOWN_PAIRS["classic"]),
    "huxley": exppairs.long_sum_terms(exppairs.KNOWN_PAIRS["huxley"]),
    "huxley-ba2": exppairs.long_sum_terms(
        exppairs.pair_apply_word("BA2", exppairs.KNOWN_PAIRS["huxley"])
    ),
    "lindelof": exppairs.long_sum_terms(exppairs.KNOWN_PAIRS["lindelof"]),
}


def _parse_long(text: str):
    if text in _NAMED_LONG:
        return list(_NAMED_LONG[text])
    try:
        return exppairs.parse_terms(text)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_balance(args) -> int:
    long_terms = _parse_long(args.long)
    try:
        short_terms = exppairs.parse_terms(args.short)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.alpha_range:
        lo, hi = (_fraction(s) for s in args.alpha_range.split(","))
    else:
        lo, hi = Fraction(-1), Fraction(0)
    result = exppairs.balance(long_terms, short_terms, (lo, hi))
    if args.json:
        _json_out(
            {
                "alpha": str(result.alpha),
                "theta": str(result.theta),
                "active": list(result.active_terms),
            }
        )
    else:
        print(f"alpha={result.alpha}")
        print(f"theta={result.theta}")
        print("active=" + ", ".join(result.active_terms))
    return 0


def cmd_table(args) -> int:
    rows = exppairs.exponent_table()
    _emit(exppairs.table_csv(rows) if args.csv_format else exppairs.table_text(rows),
          args.out)
    return 0


def _headline_magnitudes(p: Polynomial3, r_max: int, subtract_main: bool,
                         workers: int) -> list[float]:
    """|headline sum| (optionally volume-corrected) at every shell n <= r_max^2."""
    n_max = r_max * r_max
    series = lattice.coeff_series(p, n_max, workers=workers)
    origin = p.evaluate(0, 0, 0)
    running = Fraction(origin if p.degree == 0 else 0)
    avg = sphere_average(p)
    out = []
    for n in range(1, n_max + 1):
        running += series.values[n - 1]
        value = float(running)
        if subtract_main:
            value -= (4 * math.pi / 3) * float(avg) * n ** ((p.degree + 3) / 2)
        out.append(abs(value))
    return out


def _fit_from_magnitudes(mags: list[float], r_max: int) -> FitResult:
    xs, ys = [], []
    edge = 4
    running = 0.0
    idx = 0
    while edge <= len(mags):
        while idx < edge:
            running = max(running, mags[idx])
            idx += 1
        if running > 0:
            xs.append(math.log(math.sqrt(edge)))
            ys.append(math.log(running))
        edge *= 4
    if len(xs) < 3:
        raise CheckFailed("degenerate series: too few nonzero dyadic windows to fit")
    return linear_fit(xs, ys)


def cmd_fit(args) -> int:
    if args.from_csv:
        mags, r_max = _read_fit_csv(args.from_csv)
    else:
        if args.poly is None:
            raise UsageError("fit needs --poly or --from-csv")
        p = _poly_arg(args.poly)
        if args.r_max < 16:
            raise UsageError("need --r-max >= 16")
        if not args.subtract_main and sphere_average(p) != 0:
            raise UsageError(
                "fit requires a polynomial with zero mean on the sphere "
                "(or --subtract-main to remove the volume term)"
            )
        mags = _headline_magnitudes(p, args.r_max, args.subtract_main, args.threads)
        r_max = args.r_max
        if args.csv:
            lines = ["n,R,abs_sum"]
            lines.extend(
                f"{n},{math.sqrt(n)!r},{m!r}" for n, m in enumerate(mags, start=1)
            )
            _emit("\n".join(lines) + "\n", args.csv)
    if all(m == 0.0 for m in mags):
        raise CheckFailed("degenerate series: headline sum is identically zero")
    fit = _fit_from_magnitudes(mags, r_max)
    if args.json:
        _json_out(
            {"slope": fit.slope, "intercept": fit.intercept,
             "r_squared": fit.r_squared, "points_used": fit.points_used}
        )
    else:
        print(
            f"slope={fit.slope:.6f} intercept={fit.intercept:.6f} "
            f"r_squared={fit.r_squared:.6f} points={fit.points_used}"
        )
    return 0


def _read_fit_csv(path: str) -> tuple[list[float], int]:
    mags: dict[int, float] = {}
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "n,R,abs_sum":
            raise UsageError(f"unexpected series header {header!r}")
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) != 3:
                continue
            mags[int(parts[0])] = float(parts[2])
    if not mags:
        raise UsageError("empty series file")
    n_max = max(mags)
    return [mags.get(n, 0.0) for n in range(1, n_max + 1)], math.isqrt(n_max)


def cmd_theta_check(args) -> int:
    p = _poly_arg(args.poly)
    ctx = modular.theta_context(p, n_max=args.n_max)
    reports = []
    if args.gamma:
        try:
            a, b, c, d = (int(s) for s in args.gamma.split(","))
            zr, zi = (float(s) for s in args.z.split(","))
        except (ValueError, AttributeError):
            raise UsageError("--gamma wants a,b,c,d and --z wants re,im")
        try:
            gamma = modular.GammaElement(a, b, c, d)
        except ValueError as exc:
            raise UsageError(str(exc))
        reports.append(
            modular.transformation_check(ctx, gamma, complex(zr, zi), tol=args.tol)
        )
    else:
        reports.extend(
            modular.sample_checks(ctx, args.sample, seed=args.seed, tol=args.tol)
        )
    ok = True
    for rep in reports:
        if args.json:
            _json_out(rep.to_dict())
        else:
            status = "pass" if rep.passed else (
                "inconclusive" if rep.inconclusive else "FAIL"
            )
            print(
                f"gamma={rep.gamma} z={rep.z.real:+.4f}{rep.z.imag:+.4f}i "
                f"rel_err={rep.rel_err:.3e} {status}"
            )
        ok = ok and rep.passed
    if not ok:
        raise CheckFailed("transformation check failed")
    return 0


def cmd_gauss(args) -> int:
    try:
        direct = modular.gauss_sum_direct(args.d, args.c)
        closed = modular.gauss_sum_closed(args.d, args.c)
    except ValueError as exc:
        raise UsageError(str(exc))
    diff = abs(direct - closed)
    print(f"direct={direct:.12g} closed={closed:.12g} |diff|={diff:.3e}")
    if args.xi is not None:
        s_val = modular.quadratic_sum_S(args.xi, args.d, args.c)
        print(f"S(xi={args.xi})={s_val:.12g}")
    if diff > 1e-10:
        raise CheckFailed("closed form disagrees with direct sum")
    return 0


# -- parser wiring -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latharm",
        description="Lattice sums of polynomials over spheres: exact series, "
        "oscillatory sums, theta modularity checks, exponent balancing.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker cap for exact series (default: LH_THREADS or 1)",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help="seed for sampled checks (default: LH_SEED or 0)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(fn=fn)
        return p

    p = add("sum", cmd_sum, "exact sum of a polynomial over |x|^2 <= R^2")
    p.add_argument("--poly", required=True)
    p.add_argument("--r-sq", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = add("coeffs", cmd_coeffs, "exact shell coefficients a_n as CSV or JSON")
    p.add_argument("--poly", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--csv", default=None, help="output path ('-' = stdout)")
    p.add_argument("--json", action="store_true")

    p = add("shortsum", cmd_shortsum, "weighted boundary-shell sum")
    p.add_argument("--poly", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--json", action="store_true")

    p = add("longsum", cmd_longsum, "smoothed lattice sum, physical side")
    p.add_argument("--poly", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--json", action="store_true")

    p = add("freqsum", cmd_freqsum, "smoothed lattice sum, frequency side")
    p.add_argument("--poly", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--n-trunc", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = add("expsum", cmd_expsum, "oscillatory lattice exponential sum / bound sweep")
    p.add_argument("--poly", default="1")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--h", default=None, help="offset h1,h2,h3 (rationals)")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-list", default=None)
    p.add_argument("--csv", default=None)
    p.add_argument("--json", action="store_true")

    p = add("pair", cmd_pair, "apply an A/B process word to an exponent pair")
    p.add_argument("--pair", required=True, help="k,l as rationals")
    p.add_argument("--word", default="", help='process word, e.g. "BA2"')
    eps = p.add_mutually_exclusive_group()
    eps.add_argument("--eps", dest="eps", action="store_true", default=None)
    eps.add_argument("--no-eps", dest="eps", action="store_false")

    p = add("balance", cmd_balance, "exact minimax balance of error terms")
    p.add_argument("--long", required=True,
                   help="'a,b;a,b;...' or a named list (classic, huxley-ba2, ...)")
    p.add_argument("--short", required=True,
                   help="'a,b;...' or a model name (trivial, CI, HB, cusp, GLH, RC)")
    p.add_argument("--alpha-range", default=None, help="lo,hi rationals")
    p.add_argument("--json", action="store_true")

    p = add("table", cmd_table, "regenerate the exponent summary table")
    p.add_argument("--csv", dest="csv_format", action="store_true")
    p.add_argument("--out", default=None)

    p = add("fit", cmd_fit, "fit the growth exponent of the headline sum")
    p.add_argument("--poly", default=None)
    p.add_argument("--r-max", type=int, default=64)
    p.add_argument("--subtract-main", action="store_true",
                   help="subtract the volume main term (for non-mean-zero P)")
    p.add_argument("--csv", default=None, help="emit the (n, R, |sum|) series")
    p.add_argument("--from-csv", default=None, help="re-fit a previously emitted series")
    p.add_argument("--json", action="store_true")

    p = add("theta-check", cmd_theta_check, "verify the theta transformation law")
    p.add_argument("--poly", default="5*(x^4+y^4+z^4)-3*(x^2+y^2+z^2)^2")
    p.add_argument("--gamma", default=None, help="a,b,c,d")
    p.add_argument("--z", default=None, help="re,im")
    p.add_argument("--sample", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--n-max", type=int, default=modular.DEFAULT_N_MAX)
    p.add_argument("--json", action="store_true")

    p = add("gauss", cmd_gauss, "quadratic Gauss sum, direct vs closed form")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--xi", type=int, default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already; normalize others
        return 2 if exc.code not in (0,) else 0
    try:
        args.threads = args.threads if args.threads is not None else _env_int("LH_THREADS", 1)
        args.seed = args.seed if args.seed is not None else _env_int("LH_SEED", 0)
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
