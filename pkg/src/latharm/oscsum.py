"""Oscillatory exponential sums and the frequency-side smoothed lattice sum.

The centrepiece is a small closed term algebra for expressions of the form

    pi^p R^a H^b (2R+H)^w  Q(xi) sin(pi c |xi| + pi s/2) ... / |xi|^m

(with one or two trig factors, c in {2R, H, 2R+H}).  The algebra is closed
under differentiation in xi, which lets the smoothing kernel's Fourier
transform be hit with a polynomial differential operator symbolically and
then evaluated at lattice frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .lattice import main_term
from .poly import Polynomial3
from .util import FitResult, KahanSum, linear_fit

# Frequency scales appearing in trig phases pi * c * |xi|.
FREQ_2R = "2R"
FREQ_H = "H"
FREQ_MIX = "2R+H"


@dataclass(frozen=True)
class TrigFactor:
    """sin(pi * c * |xi| + pi * shift / 2) with symbolic scale c."""

    freq: str
    shift: int  # quarter turns mod 4

    def shifted(self) -> "TrigFactor":
        return TrigFactor(self.freq, (self.shift + 1) % 4)

    def scale_value(self, r: float, h: float) -> float:
        if self.freq == FREQ_2R:
            return 2 * r
        if self.freq == FREQ_H:
            return h
        return 2 * r + h

    def value(self, norm: float, r: float, h: float):
        return np.sin(np.pi * (self.scale_value(r, h) * norm + self.shift / 2.0))


@dataclass(frozen=True)
class RadialTerm:
    """One closed-form term of a differentiated radial Fourier transform."""

    pi_pow: int
    r_pow: int
    h_pow: int  # may be -1 (the smoothing kernel carries R/H)
    mix_pow: int  # power of (2R + H)
    poly: Polynomial3
    denom_pow: int
    trig: tuple[TrigFactor, ...]

    def structure_key(self):
        return (self.pi_pow, self.r_pow, self.h_pow, self.mix_pow, self.denom_pow, self.trig)

    def prefactor(self, r: float, h: float) -> float:
        return (
            math.pi**self.pi_pow
            * r**self.r_pow
            * h**self.h_pow
            * (2 * r + h) ** self.mix_pow
        )

    def differentiate(self, axis: int) -> list["RadialTerm"]:
        """Partial derivative in xi_axis, as a list of terms of the same shape."""
        out: list[RadialTerm] = []
        xi_j = Polynomial3.variable(axis)
        dpoly = self.poly.partial(axis)
        if dpoly:
            out.append(
                RadialTerm(
                    self.pi_pow, self.r_pow, self.h_pow, self.mix_pow,
                    dpoly, self.denom_pow, self.trig,
                )
            )
        for idx, factor in enumerate(self.trig):
            # d/dxi_j sin(pi c |xi| + .) = pi c (xi_j/|xi|) sin(pi c |xi| + . + pi/2)
            new_trig = tuple(
                f.shifted() if t == idx else f for t, f in enumerate(self.trig)
            )
            scaled = self.poly * xi_j
            r0, h0, m0, coeff = self.r_pow, self.h_pow, self.mix_pow, 1
            if factor.freq == FREQ_2R:
                r0 += 1
                coeff = 2
            elif factor.freq == FREQ_H:
                h0 += 1
            else:
                m0 += 1
            out.append(
                RadialTerm(
                    self.pi_pow + 1, r0, h0, m0,
                    scaled * coeff, self.denom_pow + 1, new_trig,
                )
            )
        out.append(
            RadialTerm(
                self.pi_pow, self.r_pow, self.h_pow, self.mix_pow,
                self.poly * xi_j * (-self.denom_pow), self.denom_pow + 2, self.trig,
            )
        )
        return out


def merge_terms(terms: Iterable[RadialTerm]) -> tuple[RadialTerm, ...]:
    """Combine terms sharing all structure except the polynomial."""
    merged: dict[tuple, Polynomial3] = {}
    for t in terms:
        key = t.structure_key()
        merged[key] = merged.get(key, Polynomial3.zero()) + t.poly
    out = []
    for (pi_pow, r_pow, h_pow, mix_pow, denom_pow, trig), poly in merged.items():
        if poly:
            out.append(RadialTerm(pi_pow, r_pow, h_pow, mix_pow, poly, denom_pow, trig))
    out.sort(key=lambda t: (t.denom_pow, t.pi_pow, t.r_pow, t.h_pow, t.mix_pow,
                            tuple((f.freq, f.shift) for f in t.trig)))
    return tuple(out)


def kernel_base_terms() -> tuple[RadialTerm, ...]:
    """Fourier transform of the radial smoothing kernel f(|x|)/|x|, xi != 0.

    Two terms: sin(2 pi R |xi|) / (2 pi^2 |xi|^3) and
    -(R/H) sin(pi H |xi|) cos(pi (2R+H) |xi|) / (pi^2 |xi|^3).
    """
    half = Polynomial3.constant(Fraction(1, 2))
    return (
        RadialTerm(-2, 0, 0, 0, half, 3, (TrigFactor(FREQ_2R, 0),)),
        RadialTerm(
            -2, 1, -1, 0, Polynomial3.constant(-1), 3,
            (TrigFactor(FREQ_H, 0), TrigFactor(FREQ_MIX, 1)),  # cos = sin shifted
        ),
    )


@dataclass(frozen=True)
class FourierTerms:
    """Symbolic transform of P(x) f(|x|)/|x|: term list, up to a factor of i.

    For odd-degree P the operator carries an odd power of 1/i, so the value
    is i times the real term sum; `imaginary` records that.
    """

    nu: int
    terms: tuple[RadialTerm, ...]
    imaginary: bool

    def min_denom_pow(self) -> int:
        return min(t.denom_pow for t in self.terms)


def gP_fourier_terms(p: Polynomial3) -> FourierTerms:
    """Apply P(-d/(2 pi i)) to the kernel transform, symbolically.

    For homogeneous P of degree nu this equals (i/(2 pi))^nu P(d/dxi) applied
    to the two base terms; the resulting list stays in the closed term shape
    and every denominator power is at least deg(poly) + 3.
    """
    if not p.is_homogeneous:
        raise ValueError("operator application requires homogeneous P")
    p.require_real("fourier term algebra")
    nu = p.degree
    collected: list[RadialTerm] = []
    for (i, j, k), coeff in p.sorted_terms():
        terms: list[RadialTerm] = list(kernel_base_terms())
        for axis, reps in ((0, i), (1, j), (2, k)):
            for _ in range(reps):
                new_terms: list[RadialTerm] = []
                for t in terms:
                    new_terms.extend(t.differentiate(axis))
                terms = list(merge_terms(new_terms))
        scale = coeff.re
        collected.extend(
            RadialTerm(t.pi_pow, t.r_pow, t.h_pow, t.mix_pow, t.poly * scale,
                       t.denom_pow, t.trig)
            for t in terms
        )
    # overall factor (i / 2pi)^nu = i^nu 2^-nu pi^-nu
    sign = 1 if nu % 4 in (0, 1) else -1
    imaginary = nu % 2 == 1
    op_scale = Fraction(sign, 2**nu)
    scaled = [
        RadialTerm(t.pi_pow - nu, t.r_pow, t.h_pow, t.mix_pow, t.poly * op_scale,
                   t.denom_pow, t.trig)
        for t in collected
    ]
    # homogenize every numerator polynomial to degree nu (multiply by powers
    # of |xi|^2); this groups terms into the closed families with denominator
    # powers 3 + nu1 + 2 nu2 and 3 + nu1 + nu2 + 2 nu3
    r2 = Polynomial3.norm_squared()
    homogenized = []
    for t in scaled:
        deficit = nu - t.poly.degree
        if deficit:
            homogenized.append(
                RadialTerm(t.pi_pow, t.r_pow, t.h_pow, t.mix_pow,
                           t.poly * r2 ** (deficit // 2),
                           t.denom_pow + deficit, t.trig)
            )
        else:
            homogenized.append(t)
    final = merge_terms(homogenized)
    for t in final:
        assert t.poly.degree == nu or not t.poly
        assert t.denom_pow >= nu + 3, "term outside convergent shape"
    return FourierTerms(nu=nu, terms=final, imaginary=imaginary)


def eval_radial_terms(
    expansion: FourierTerms, xi: Sequence[int], r: float, h: float
) -> complex:
    """Value of the term sum at a nonzero integer frequency."""
    x, y, z = xi
    nsq = x * x + y * y + z * z
    if nsq == 0:
        raise ValueError("the transform terms are singular at xi = 0")
    norm = math.sqrt(nsq)
    total = 0.0
    for t in expansion.terms:
        val = t.prefactor(r, h) * t.poly.evaluate_float(x, y, z) / norm**t.denom_pow
        for f in t.trig:
            val *= math.sin(math.pi * (f.scale_value(r, h) * norm + f.shift / 2.0))
        total += val
    return total * 1j if expansion.imaginary else complex(total)


def _frequency_grid(n_trunc: int):
    """Arrays (x, y, z, nsq) for all nonzero |xi|^2 <= n_trunc."""
    k = math.isqrt(n_trunc)
    rng = np.arange(-k, k + 1)
    x, y, z = np.meshgrid(rng, rng, rng, indexing="ij")
    nsq = x * x + y * y + z * z
    mask = (nsq > 0) & (nsq <= n_trunc)
    return (
        x[mask].astype(np.float64),
        y[mask].astype(np.float64),
        z[mask].astype(np.float64),
        nsq[mask],
    )


def freq_long_sum(p: Polynomial3, r: float, h: float, n_trunc: int) -> float:
    """Main term plus the truncated frequency sum of the transformed kernel.

    Sums all nonzero frequencies with |xi|^2 <= n_trunc; shell subtotals are
    combined in ascending shell order with exact compensated addition.
    """
    if n_trunc < 1:
        raise ValueError("n_trunc must be at least 1")
    expansion = gP_fourier_terms(p)
    xf, yf, zf, nsq = _frequency_grid(n_trunc)
    norm = np.sqrt(nsq.astype(np.float64))
    contrib = np.zeros_like(norm)
    for t in expansion.terms:
        val = t.prefactor(r, h) * t.poly.evaluate_arrays(xf, yf, zf)
        val = val / norm**t.denom_pow
        for f in t.trig:
            val = val * f.value(norm, r, h)
        contrib += val
    if expansion.imaginary:
        tail = 0.0  # i * (sum that cancels pairwise under xi -> -xi)
    else:
        shells = np.bincount(nsq, weights=contrib, minlength=n_trunc + 1)
        tail = math.fsum(shells[1:])
    main = float(main_term(p, Fraction(r), Fraction(h))) * math.pi
    return main + tail


# -- direct oscillatory sums -------------------------------------------------


def exp_sum_lattice(
    q: Polynomial3,
    n: int,
    h: tuple[float, float, float] = (0.0, 0.0, 0.0),
    r: float = 1.0,
) -> complex:
    """Sum of Q(xi) e(R |xi| + h . xi) over all |xi|^2 <= n (origin included)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    q.require_real("exponential sum")
    k = math.isqrt(n)
    rng = np.arange(-k, k + 1)
    yy, zz = np.meshgrid(rng, rng, indexing="ij")
    h1, h2, h3 = (float(v) for v in h)
    re_parts: list[float] = []
    im_parts: list[float] = []
    for x in range(-k, k + 1):
        nsq = x * x + yy * yy + zz * zz
        mask = nsq <= n
        if not mask.any():
            continue
        ym = yy[mask].astype(np.float64)
        zm = zz[mask].astype(np.float64)
        nm = nsq[mask].astype(np.float64)
        phase = r * np.sqrt(nm) + h1 * x + h2 * ym + h3 * zm
        vals = q.evaluate_arrays(np.full_like(ym, float(x)), ym, zm) * np.exp(
            2j * np.pi * phase
        )
        re_parts.append(float(vals.real.sum()))
        im_parts.append(float(vals.imag.sum()))
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def exp_sum_grid(n: int, d: int, r: float) -> float:
    """Sum over the dyadic block D < y <= 2D of |sum over N < x <= 2N of
    e(R(sqrt(x+y) - sqrt(x)))|."""
    if n < 1 or d < 1:
        raise ValueError("need N, D >= 1")
    if d > n:
        raise ValueError("need D <= N")
    xs = np.arange(n + 1, 2 * n + 1, dtype=np.float64)
    acc = KahanSum()
    for y in range(d + 1, 2 * d + 1):
        phases = r * (np.sqrt(xs + y) - np.sqrt(xs))
        inner = np.exp(2j * np.pi * phases).sum()
        acc.add(abs(inner))
    return acc.value()


# -- empirical bound reports --------------------------------------------------


@dataclass(frozen=True)
class BoundCheckRow:
    n: int
    abs_v: float
    bound: float
    ratio: float


@dataclass(frozen=True)
class BoundCheckReport:
    """Observed |V_N| against N^(nu/2) min(N^(3/2), N^(5/4) + N^(15/14) R^(3/14))."""

    nu: int
    r: float
    rows: tuple[BoundCheckRow, ...]
    max_ratio: float
    slopes: dict[str, FitResult | None]

    def to_csv(self) -> str:
        lines = ["N,abs_V,bound,ratio"]
        lines.extend(
            f"{row.n},{row.abs_v!r},{row.bound!r},{row.ratio!r}" for row in self.rows
        )
        return "\n".join(lines) + "\n"


def bound_value(n: int, nu: int, r: float) -> float:
    """Comparison bound N^(nu/2) min(N^(3/2), N^(5/4) + N^(15/14) R^(3/14))."""
    return n ** (nu / 2) * min(n**1.5, n**1.25 + n ** (15 / 14) * r ** (3 / 14))


def bound_check_VNQR(
    q: Polynomial3,
    n_list: Sequence[int],
    r: float,
    h: tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> BoundCheckReport:
    """Evaluate the lattice exponential sum along an N sweep and compare.

    Shell sums are accumulated once up to max(N), so the sweep costs a single
    enumeration.  Slopes of log|V| vs log N are fitted per regime, with the
    regime cut at N ~ R^(1/2) and N ~ R^(6/5).
    """
    if not n_list or list(n_list) != sorted(set(n_list)):
        raise ValueError("n_list must be ascending and nonempty")
    q.require_real("exponential sum")
    nu = q.degree
    n_top = n_list[-1]
    k = math.isqrt(n_top)
    rng = np.arange(-k, k + 1)
    yy, zz = np.meshgrid(rng, rng, indexing="ij")
    h1, h2, h3 = (float(v) for v in h)
    shell_re = np.zeros(n_top + 1)
    shell_im = np.zeros(n_top + 1)
    for x in range(-k, k + 1):
        nsq = x * x + yy * yy + zz * zz
        mask = nsq <= n_top
        if not mask.any():
            continue
        nm = nsq[mask]
        ym = yy[mask].astype(np.float64)
        zm = zz[mask].astype(np.float64)
        phase = r * np.sqrt(nm.astype(np.float64)) + h1 * x + h2 * ym + h3 * zm
        vals = q.evaluate_arrays(np.full_like(ym, float(x)), ym, zm) * np.exp(
            2j * np.pi * phase
        )
        shell_re += np.bincount(nm, weights=vals.real, minlength=n_top + 1)
        shell_im += np.bincount(nm, weights=vals.imag, minlength=n_top + 1)
    cum = np.cumsum(shell_re) + 1j * np.cumsum(shell_im)
    rows = []
    for n in n_list:
        abs_v = float(abs(cum[n]))
        bound = bound_value(n, nu, r)
        rows.append(BoundCheckRow(n=n, abs_v=abs_v, bound=bound, ratio=abs_v / bound))
    regimes = {"low": [], "mid": [], "high": []}
    lo_cut, hi_cut = r**0.5, r**1.2
    for row in rows:
        if row.abs_v <= 0:
            continue
        name = "low" if row.n < lo_cut else ("mid" if row.n < hi_cut else "high")
        regimes[name].append((math.log(row.n), math.log(row.abs_v)))
    slopes: dict[str, FitResult | None] = {}
    for name, pts in regimes.items():
        slopes[name] = (
            linear_fit([p[0] for p in pts], [p[1] for p in pts])
            if len(pts) >= 3
            else None
        )
    return BoundCheckReport(
        nu=nu,
        r=r,
        rows=tuple(rows),
        max_ratio=max(row.ratio for row in rows),
        slopes=slopes,
    )
