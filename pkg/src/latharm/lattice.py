"""Exact Z^3 shell enumeration and exact/weighted lattice sums.

The shell coefficients a_n (sums of a polynomial over all lattice points of
norm-squared n) are computed exactly with big-integer arithmetic.  Weighted
sums over a smoothing window carry the exact coefficients into floating
point only through the window weight.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .poly import Polynomial3, sphere_average
from .util import FitResult, linear_fit

# Above this bound the int64 convolution path could overflow; 2^62 leaves
# headroom for one extra addition.
_INT64_SAFE = 1 << 62


def representations(n: int) -> list[tuple[int, int, int]]:
    """All (x, y, z) in Z^3 with x^2 + y^2 + z^2 = n, in lexicographic order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return [(0, 0, 0)]
    out: list[tuple[int, int, int]] = []
    kx = math.isqrt(n)
    for x in range(-kx, kx + 1):
        rem_x = n - x * x
        ky = math.isqrt(rem_x)
        for y in range(-ky, ky + 1):
            rem = rem_x - y * y
            z = math.isqrt(rem)
            if z * z == rem:
                if z == 0:
                    out.append((x, y, 0))
                else:
                    out.append((x, y, -z))
                    out.append((x, y, z))
    return out


def two_adic_part(n: int) -> int:
    """Largest power of two dividing n."""
    if n < 1:
        raise ValueError("n must be positive")
    return n & -n


@dataclass(frozen=True)
class CoefficientSeries:
    """Exact shell sums a_n for 1 <= n <= n_max of a homogeneous polynomial."""

    nu: int
    poly_id: str
    values: tuple[Fraction, ...]
    n_max: int
    is_harmonic: bool

    def a(self, n: int) -> Fraction:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside 1..{self.n_max}")
        return self.values[n - 1]

    def to_csv(self) -> str:
        lines = ["n,a_n"]
        lines.extend(f"{n},{v}" for n, v in enumerate(self.values, start=1))
        return "\n".join(lines) + "\n"


def _square_weights(exponent: int, k_max: int) -> list[int]:
    """w[j] = j^exponent summed over +-j (doubled for j > 0, 0^0 = 1)."""
    w0 = 1 if exponent == 0 else 0
    return [w0 if j == 0 else 2 * j**exponent for j in range(k_max + 1)]


def _pair_shell_sums(e1: int, e2: int, n_max: int) -> list[int]:
    """t[m] = sum over x^2 + y^2 = m of x^e1 * y^e2, exact (even exponents)."""
    k = math.isqrt(n_max)
    w1 = _square_weights(e1, k)
    w2 = _square_weights(e2, k)
    t = [0] * (n_max + 1)
    for j1 in range(k + 1):
        base = j1 * j1
        wa = w1[j1]
        limit = n_max - base
        for j2 in range(math.isqrt(limit) + 1):
            t[base + j2 * j2] += wa * w2[j2]
    return t


def _class_shell_sums(exponents: tuple[int, int, int], n_max: int) -> list[int]:
    """S[m] = sum over the shell of norm m of the monomial, exact.

    All exponents must be even. Computed as a convolution of per-axis square
    sums; the two-axis part is exact Python integers and the final axis is a
    series of shifted adds, done in int64 when a certified bound permits.
    """
    e1, e2, e3 = exponents
    t = _pair_shell_sums(e1, e2, n_max)
    k = math.isqrt(n_max)
    w3 = _square_weights(e3, k)
    # Certified bound: every intermediate value is non-negative and at most
    # max(t) * sum(w3), so int64 is safe iff that product stays small.
    bound = max(t) * sum(w3) if t else 0
    if bound < _INT64_SAFE:
        t_arr = np.asarray(t, dtype=np.int64)
        s_arr = np.zeros(n_max + 1, dtype=np.int64)
        for j in range(k + 1):
            base = j * j
            s_arr[base:] += w3[j] * t_arr[: n_max + 1 - base]
        return s_arr.tolist()
    out = [0] * (n_max + 1)
    for j in range(k + 1):
        base = j * j
        w = w3[j]
        for idx in range(n_max + 1 - base):
            out[base + idx] += w * t[idx]
    return out


def _monomial_classes(p: Polynomial3) -> list[tuple[tuple[int, int, int], int]]:
    """Group the integer form of p by sorted exponent triple.

    Monomials with an odd exponent sum to zero on every shell and are
    dropped; shells are symmetric under permuting axes, so monomials sharing
    a sorted exponent triple share their shell sums.
    """
    _, ints = p.integer_form()
    classes: dict[tuple[int, int, int], int] = {}
    for (i, j, k), coeff in ints.items():
        if i % 2 or j % 2 or k % 2:
            continue
        key = tuple(sorted((i, j, k), reverse=True))
        classes[key] = classes.get(key, 0) + coeff
    return [(key, c) for key, c in sorted(classes.items()) if c != 0]


def coeff_series(p: Polynomial3, n_max: int, workers: int = 1) -> CoefficientSeries:
    """Exact a_n = sum of p over the shell of norm n, for 1 <= n <= n_max."""
    if not p.is_homogeneous:
        raise ValueError("coefficient series requires a homogeneous polynomial")
    p.require_real("coefficient series")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    denom, _ = p.integer_form()
    classes = _monomial_classes(p)

    def shell_sums(cls: tuple[tuple[int, int, int], int]) -> list[int]:
        return _class_shell_sums(cls[0], n_max)

    if workers > 1 and len(classes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            all_sums = list(pool.map(shell_sums, classes))
    else:
        all_sums = [shell_sums(c) for c in classes]

    totals = [0] * (n_max + 1)
    for (_, coeff), sums in zip(classes, all_sums):
        for idx in range(n_max + 1):
            totals[idx] += coeff * sums[idx]
    values = tuple(Fraction(totals[n], denom) for n in range(1, n_max + 1))
    return CoefficientSeries(
        nu=p.degree,
        poly_id=p.to_string(),
        values=values,
        n_max=n_max,
        is_harmonic=p.is_harmonic,
    )


@dataclass(frozen=True)
class SumReport:
    """A computed lattice sum together with how many points it covered.

    `value` is exact (Fraction) for the unweighted ball sum and float for the
    weighted window sums; `term_count` counts the lattice points on the
    shells included in the summation range (plus the origin where it
    participates).
    """

    r_sq: Fraction
    h: float | None
    value: Fraction | float
    term_count: int


def _point_counts(n_max: int) -> CoefficientSeries:
    return coeff_series(Polynomial3.constant(1), n_max)


def ball_sum(p: Polynomial3, r_sq: int) -> Fraction:
    """Exact sum of p over all lattice points with |x|^2 <= r_sq."""
    if r_sq < 0:
        raise ValueError("r_sq must be non-negative")
    if not p.is_homogeneous:
        raise ValueError("ball sum requires a homogeneous polynomial")
    p.require_real("ball sum")
    origin = p.evaluate(0, 0, 0)
    origin = origin if isinstance(origin, Fraction) else Fraction(0)
    if r_sq == 0:
        return origin
    series = coeff_series(p, r_sq)
    return origin + sum(series.values, Fraction(0))


def ball_sum_report(p: Polynomial3, r_sq: int) -> SumReport:
    """Exact ball sum with the number of lattice points included."""
    value = ball_sum(p, r_sq)
    count = 1  # origin
    if r_sq >= 1:
        count += sum(int(v) for v in _point_counts(r_sq).values)
    return SumReport(r_sq=Fraction(r_sq), h=None, value=value, term_count=count)


def short_sum_report(p: Polynomial3, r: float, h: float) -> SumReport:
    """Weighted boundary-shell sum with the number of points in the window."""
    value = short_sum(p, r, h)
    lo, hi = _window_bounds(r, h)
    count = 0
    if lo <= hi:
        counts = _point_counts(hi)
        count = sum(int(counts.a(n)) for n in range(max(lo, 1), hi + 1))
    return SumReport(r_sq=Fraction(r) ** 2, h=h, value=value, term_count=count)


def long_sum_report(p: Polynomial3, r: float, h: float) -> SumReport:
    """Smoothed lattice sum with the number of points carrying weight."""
    value = long_sum_physical(p, r, h)
    _, hi = _window_bounds(r, h)
    counts = _point_counts(max(hi, 1))
    count = sum(int(v) for v in counts.values) + 1  # origin always weighted
    return SumReport(r_sq=Fraction(r) ** 2, h=h, value=value, term_count=count)


def cutoff_f(x: float, r: float, h: float) -> float:
    """Smoothing cutoff: identity on [0, R], linear ramp to 0 on [R, R+H]."""
    if x < 0:
        raise ValueError("cutoff argument must be non-negative")
    if x <= r:
        return x
    if x >= r + h:
        return 0.0
    return r * (r + h - x) / h


def _window_bounds(r: float, h: float) -> tuple[int, int]:
    """Integer n range with R^2 <= n <= (R+H)^2, exact at the boundaries."""
    r_sq = Fraction(r) ** 2
    top_sq = Fraction(r + h) ** 2
    lo = math.ceil(r_sq)
    hi = math.floor(top_sq)
    return lo, hi


def short_sum(p: Polynomial3, r: float, h: float, series: CoefficientSeries | None = None) -> float:
    """Weighted boundary-shell sum over R^2 <= n <= (R+H)^2."""
    if r < 1 or not 0 < h <= 1:
        raise ValueError("need R >= 1 and 0 < H <= 1")
    lo, hi = _window_bounds(r, h)
    if lo > hi:
        return 0.0
    if series is None or series.n_max < hi:
        series = coeff_series(p, hi)
    terms = []
    for n in range(max(lo, 1), hi + 1):
        a_n = series.a(n)
        if a_n:
            root = math.sqrt(n)
            terms.append(float(a_n) * cutoff_f(root, r, h) / root)
    return math.fsum(terms)


def long_sum_physical(
    p: Polynomial3, r: float, h: float, series: CoefficientSeries | None = None
) -> float:
    """Smoothed lattice sum: sum over n of a_n f(sqrt n)/sqrt n, plus origin.

    The weight is exactly 1 for n <= R^2, so that part of the sum is done
    exactly and converted to float once.  The origin contributes p(0) (the
    weight extends continuously to 1 at 0), which vanishes unless deg p = 0.
    """
    if r < 1 or not 0 < h <= 1:
        raise ValueError("need R >= 1 and 0 < H <= 1")
    if not p.is_homogeneous:
        raise ValueError("long sum requires a homogeneous polynomial")
    r_sq = Fraction(r) ** 2
    _, hi = _window_bounds(r, h)
    if series is None or series.n_max < max(hi, 1):
        series = coeff_series(p, max(hi, 1))
    inner = Fraction(0)
    ramp_terms = []
    for n in range(1, hi + 1):
        a_n = series.a(n)
        if not a_n:
            continue
        if n <= r_sq:
            inner += a_n
        else:
            root = math.sqrt(n)
            ramp_terms.append(float(a_n) * cutoff_f(root, r, h) / root)
    origin = p.evaluate(0, 0, 0)
    origin_val = float(origin) if p.degree == 0 else 0.0
    return float(inner) + math.fsum(ramp_terms) + origin_val


def main_term(
    p: Polynomial3, r: Fraction | int, h: Fraction | int
) -> Fraction:
    """Integral of p(x) f(|x|)/|x| over R^3, divided by pi, exactly.

    Radially: 4 * avg(p) * integral of f(t) t^(nu+1) dt over [0, R+H], with
    the piecewise-polynomial integral done in exact rational arithmetic.
    """
    if not p.is_homogeneous:
        raise ValueError("main term requires a homogeneous polynomial")
    avg = sphere_average(p)
    if not avg:
        return Fraction(0)
    nu = p.degree
    r = Fraction(r)
    h = Fraction(h)
    rh = r + h
    # integral of t^(nu+2) over [0, R]
    inner = r ** (nu + 3) / (nu + 3)
    # integral of R (R+H-t)/H * t^(nu+1) over [R, R+H]
    if h:
        ramp = (r / h) * (
            rh * (rh ** (nu + 2) - r ** (nu + 2)) / (nu + 2)
            - (rh ** (nu + 3) - r ** (nu + 3)) / (nu + 3)
        )
    else:
        ramp = Fraction(0)
    return 4 * avg * (inner + ramp)


@dataclass(frozen=True)
class CoefficientBoundReport:
    """Observed growth of |a_n| against a cusp-form coefficient bound."""

    mode: str
    exponent: Fraction
    max_ratio: float
    argmax_n: int
    fit: FitResult | None

    def summary(self) -> str:
        fit_part = (
            f"slope={self.fit.slope:.4f} (r2={self.fit.r_squared:.4f}, {self.fit.points_used} pts)"
            if self.fit
            else "slope=n/a (degenerate series)"
        )
        return (
            f"mode={self.mode} exponent={self.exponent} "
            f"max_ratio={self.max_ratio:.6g} at n={self.argmax_n}; {fit_part}"
        )


def coefficient_bound_report(
    series: CoefficientSeries, use_gcd: bool = False
) -> CoefficientBoundReport:
    """Ratios of |a_n| to n^(k/2-1/4), or with the two-adic refinement.

    With use_gcd the comparison bound is n^(k/2-5/16) * (n, 2^inf)^(5/8).
    Only meaningful for series of harmonic polynomials of degree >= 1, where
    the theta series is a cusp form of weight k = nu + 3/2.
    """
    if series.nu < 1 or not series.is_harmonic:
        raise ValueError("coefficient bounds apply to harmonic polynomials of degree >= 1")
    k_half = Fraction(series.nu, 2) + Fraction(3, 4)  # k/2 with k = nu + 3/2
    exponent = k_half - (Fraction(5, 16) if use_gcd else Fraction(1, 4))
    mode = "blomer-harcos" if use_gcd else "sarnak"
    exp_f = float(exponent)
    max_ratio = 0.0
    argmax = 0
    for n in range(1, series.n_max + 1):
        a_n = series.values[n - 1]
        if not a_n:
            continue
        denom = n**exp_f
        if use_gcd:
            denom *= two_adic_part(n) ** 0.625
        ratio = abs(float(a_n)) / denom
        if ratio > max_ratio:
            max_ratio = ratio
            argmax = n
    fit = dyadic_growth_fit(
        [abs(float(v)) for v in series.values], start_exponent=2
    )
    return CoefficientBoundReport(
        mode=mode, exponent=exponent, max_ratio=max_ratio, argmax_n=argmax, fit=fit
    )


def dyadic_growth_fit(
    magnitudes: Sequence[float], start_exponent: int = 2
) -> FitResult | None:
    """Fit log(running max) against log(n) at dyadic window ends.

    magnitudes[i] is the value at n = i + 1.  Returns None when fewer than
    three dyadic windows carry a nonzero running maximum.
    """
    n_max = len(magnitudes)
    xs, ys = [], []
    running = 0.0
    edge = 1 << start_exponent
    idx = 0
    while edge <= n_max:
        while idx < edge:
            running = max(running, magnitudes[idx])
            idx += 1
        if running > 0:
            xs.append(math.log(edge))
            ys.append(math.log(running))
        edge <<= 1
    if len(xs) < 3:
        return None
    return linear_fit(xs, ys)
