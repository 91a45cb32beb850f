"""Theta series on the upper half-plane and their transformation law.

The theta series of a harmonic polynomial of degree nu has weight nu + 3/2
under the level-4 congruence group; this module evaluates the series with a
certified truncation tail, builds the half-integral-weight automorphy factor
(extended quadratic symbol, epsilon factor, principal square root), and
checks the transformation law numerically.  Quadratic Gauss sums are
available both by direct summation and in closed form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .lattice import CoefficientSeries, coeff_series
from .poly import Polynomial3

DEFAULT_Y_MIN = 0.05
DEFAULT_N_MAX = 1 << 14
N_MAX_CAP = 10**6


def e_of(t: float) -> complex:
    """exp(2 pi i t)."""
    return cmath.exp(2j * math.pi * t)


def epsilon_d(d: int) -> complex:
    """1 for d = 1 mod 4, i for d = 3 mod 4; d must be odd."""
    if d % 2 == 0:
        raise ValueError("epsilon_d requires odd d")
    return 1 if d % 4 == 1 else 1j


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for positive odd n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi symbol needs positive odd n")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def shimura_legendre(c: int, d: int, negative_rule: str = "sign") -> int:
    """Quadratic symbol (c/d) for odd d, extended to all odd d.

    For d > 0 this is the Jacobi symbol.  For d < 0 the default rule gives
    (c/|d|) when c > 0 and -(c/|d|) when c < 0; (0/+-1) = 1.  The end-to-end
    transformation check validates the convention; negative_rule="absolute"
    drops the sign flip for experimentation.
    """
    if d % 2 == 0:
        raise ValueError("extended symbol requires odd d")
    if c == 0:
        if d in (1, -1):
            return 1
        raise ValueError("(0/d) undefined for |d| > 1 (non-coprime)")
    if math.gcd(c, d) != 1:
        raise ValueError(f"non-coprime symbol arguments ({c}/{d})")
    base = jacobi_symbol(c, abs(d)) if abs(d) > 1 else 1
    if d > 0:
        return base
    if negative_rule == "absolute":
        return base
    return base if c > 0 else -base


@dataclass(frozen=True)
class GammaElement:
    """Integer matrix (a b; c d) with determinant 1 and 4 | c."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")
        if self.c % 4 != 0:
            raise ValueError("lower-left entry must be divisible by 4")

    def apply(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def __mul__(self, other: "GammaElement") -> "GammaElement":
        return GammaElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


def gamma0_4_from_cd(c: int, d: int) -> GammaElement:
    """Complete a bottom row (c, d) with 4 | c, gcd(c,d)=1 to determinant 1.

    Deterministic choice: 0 <= a < |c| when c != 0; for c = 0 (so d = +-1)
    the completion is +-identity.
    """
    if c % 4 != 0:
        raise ValueError("c must be divisible by 4")
    if math.gcd(c, d) != 1:
        raise ValueError("need gcd(c, d) = 1")
    if c == 0:
        return GammaElement(d, 0, 0, d)  # d = +-1 here
    a = pow(d, -1, abs(c)) % abs(c)
    b = (a * d - 1) // c
    return GammaElement(a, b, c, d)


def automorphy_j(gamma: GammaElement, z: complex) -> complex:
    """(c/d) * epsilon_d^(-1) * (cz + d)^(1/2), principal square root."""
    c, d = gamma.c, gamma.d
    if c == 0:
        symbol = 1  # (0 / +-1)
    else:
        symbol = shimura_legendre(c, d)
    return symbol / epsilon_d(d) * cmath.sqrt(c * z + d)


@dataclass(frozen=True)
class ThetaContext:
    """Evaluation context: harmonic polynomial, weight, exact coefficients.

    coeff_c is C in the crude bound |a_n| <= C n^(nu/2 + 1), used for the
    certified truncation tail.
    """

    poly: Polynomial3
    nu: int
    weight: Fraction
    series: CoefficientSeries
    n_max: int
    y_min: float
    coeff_c: float

    def tail_bound(self, y: float, n_terms: int) -> float:
        """Certified bound on sum over n > n_terms of |a_n| e^(-2 pi n y)."""
        p = self.nu / 2 + 1
        q = math.exp(-2 * math.pi * y)
        growth = (1 + 1 / (n_terms + 1)) ** p
        t = growth * q
        if t >= 1:
            return math.inf
        lead = self.coeff_c * (n_terms + 1) ** p * q ** (n_terms + 1)
        return lead / (1 - t)


def theta_context(
    p: Polynomial3, n_max: int = DEFAULT_N_MAX, y_min: float = DEFAULT_Y_MIN
) -> ThetaContext:
    """Precompute the exact coefficient series for theta evaluation."""
    if not p.is_homogeneous or not p.is_harmonic:
        raise ValueError("theta context requires a harmonic homogeneous polynomial")
    p.require_real("theta context")
    if not 1 <= n_max <= N_MAX_CAP:
        raise ValueError(f"n_max must be in 1..{N_MAX_CAP}")
    series = coeff_series(p, n_max)
    # |a_n| <= r3(n) max|P| <= 18 n * (sum |coeffs|) n^(nu/2)
    coeff_c = 18.0 * float(p.coeff_l1())
    return ThetaContext(
        poly=p,
        nu=p.degree,
        weight=Fraction(p.degree) + Fraction(3, 2),
        series=series,
        n_max=n_max,
        y_min=y_min,
        coeff_c=coeff_c,
    )


def theta_eval(ctx: ThetaContext, z: complex, tol: float = 1e-12) -> complex:
    """Sum of a_n e(nz) truncated so the certified tail is below tol."""
    y = z.imag
    if y < ctx.y_min:
        raise ValueError(f"Im z = {y} below configured minimum {ctx.y_min}")
    n_terms = None
    m = 16
    while m <= ctx.n_max:
        if ctx.tail_bound(y, m) < tol:
            n_terms = m
            break
        m *= 2
    if n_terms is None:
        if ctx.tail_bound(y, ctx.n_max) < tol:
            n_terms = ctx.n_max
        else:
            raise ValueError(
                f"cannot certify tail < {tol} with n_max={ctx.n_max} at Im z = {y}"
            )
    q1 = e_of(z.real)  # e(z) split into phase and decay for stability
    total = 0 + 0j
    for n in range(n_terms, 0, -1):  # ascending magnitude
        a_n = ctx.series.values[n - 1]
        if a_n:
            total += float(a_n) * (q1**n) * math.exp(-2 * math.pi * n * y)
    if ctx.nu == 0:
        origin = ctx.poly.evaluate(0, 0, 0)
        total += float(origin)
    return total


@dataclass(frozen=True)
class TransformReport:
    """Numerical check of theta(gamma z) = j(gamma, z)^(2 nu + 3) theta(z)."""

    gamma: tuple[int, int, int, int]
    z: complex
    lhs: complex
    rhs: complex
    rel_err: float
    tol: float
    passed: bool
    inconclusive: bool

    def to_dict(self) -> dict:
        return {
            "gamma": list(self.gamma),
            "z": [self.z.real, self.z.imag],
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "rel_err": self.rel_err,
            "pass": self.passed,
            "inconclusive": self.inconclusive,
        }


def transformation_check(
    ctx: ThetaContext,
    gamma: GammaElement,
    z: complex,
    tol: float = 1e-6,
    floor: float = 1e-20,
) -> TransformReport:
    """Compare theta(gamma z) against the automorphy-factor prediction.

    The error is measured relative to the larger side (with an absolute
    floor); a result below the floor on both sides is flagged inconclusive.
    """
    image = gamma.apply(z)
    if z.imag < ctx.y_min or image.imag < ctx.y_min:
        raise ValueError("both z and gamma z must stay above y_min")
    eval_tol = min(1e-14, tol * 1e-4)
    lhs = theta_eval(ctx, image, tol=eval_tol)
    base = theta_eval(ctx, z, tol=eval_tol)
    power = 2 * ctx.nu + 3
    rhs = automorphy_j(gamma, z) ** power * base
    scale = max(abs(lhs), abs(rhs), floor)
    rel_err = abs(lhs - rhs) / scale
    inconclusive = abs(base) < floor
    return TransformReport(
        gamma=gamma.entries(),
        z=z,
        lhs=lhs,
        rhs=rhs,
        rel_err=rel_err,
        tol=tol,
        passed=(rel_err < tol) and not inconclusive,
        inconclusive=inconclusive,
    )


def sample_checks(
    ctx: ThetaContext,
    count: int,
    seed: int = 0,
    c_pool: tuple[int, ...] = (0, 4, -4, 8, -8, 12, -12, 16, -16),
    y_range: tuple[float, float] = (0.1, 2.0),
    tol: float = 1e-6,
) -> Iterator[TransformReport]:
    """Deterministic stream of transformation checks at pseudo-random (gamma, z)."""
    import random

    rng = random.Random(seed)
    produced = 0
    while produced < count:
        c = rng.choice(c_pool)
        d_candidates = [d for d in range(-25, 26, 2) if c == 0 or math.gcd(c, d) == 1]
        d = rng.choice(d_candidates) if c != 0 else rng.choice([1, -1])
        gamma = gamma0_4_from_cd(c, d)
        x = rng.uniform(-0.5, 0.5)
        y = rng.uniform(*y_range)
        z = complex(x, y)
        if gamma.apply(z).imag < ctx.y_min:
            continue
        yield transformation_check(ctx, gamma, z, tol=tol)
        produced += 1


# -- quadratic Gauss sums ----------------------------------------------------


def gauss_sum_direct(d: int, c: int) -> complex:
    """Sum of e(d m^2 / c) over m mod c, by direct summation."""
    if c == 0:
        raise ValueError("c must be nonzero")
    if math.gcd(c, d) != 1:
        raise ValueError("need gcd(c, d) = 1")
    total = 0 + 0j
    for m in range(abs(c)):
        phase = Fraction(d * m * m, c) % 1
        total += e_of(float(phase))
    return total


def gauss_sum_closed(d: int, c: int) -> complex:
    """Closed form of the quadratic Gauss sum for 4 | c and odd d."""
    if c == 0 or c % 4 != 0:
        raise ValueError("closed form requires 4 | c, c != 0")
    if d % 2 == 0:
        raise ValueError("closed form requires odd d")
    if math.gcd(c, d) != 1:
        raise ValueError("need gcd(c, d) = 1")
    if c > 0 and d > 0:
        return (1 + 1j) / epsilon_d(d) * math.sqrt(c) * jacobi_symbol(c, d)
    if c > 0 and d < 0:
        return (1 - 1j) * epsilon_d(-d) * math.sqrt(c) * jacobi_symbol(c, -d)
    if c < 0 and d > 0:
        return (1 - 1j) * epsilon_d(d) * math.sqrt(-c) * jacobi_symbol(-c, d)
    return (1 + 1j) / epsilon_d(-d) * math.sqrt(-c) * jacobi_symbol(-c, -d)


def quadratic_sum_S(xi: int, d: int, c: int) -> complex:
    """Sum of e(d (m^2 + m xi) / c) over m mod c; vanishes for odd xi."""
    if c == 0 or c % 4 != 0:
        raise ValueError("requires 4 | c, c != 0")
    if math.gcd(c, d) != 1:
        raise ValueError("need gcd(c, d) = 1")
    total = 0 + 0j
    for m in range(abs(c)):
        phase = Fraction(d * (m * m + m * xi), c) % 1
        total += e_of(float(phase))
    return total
