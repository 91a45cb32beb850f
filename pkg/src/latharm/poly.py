"""Exact polynomial algebra in three variables over the Gaussian rationals.

A polynomial is a sparse map from exponent triples (i, j, k) to Gaussian
rational coefficients (exact rational real and imaginary parts).  Everything
in this module is exact: parsing, arithmetic, differentiation, harmonic
decomposition and sphere averages never touch floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Union

Monomial = tuple[int, int, int]

DEFAULT_DEGREE_CAP = 64

VARIABLE_NAMES = ("x", "y", "z")

RationalLike = Union[int, Fraction]


class PolyParseError(ValueError):
    """Syntax error in a polynomial expression, with the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DegreeCapError(ValueError):
    """A monomial exceeded the configured degree cap."""


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(value: "GaussianRational | RationalLike") -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(Fraction(value), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    @property
    def is_real(self) -> bool:
        return not self.im

    def l1_bound(self) -> Fraction:
        """|re| + |im|, an upper bound for the modulus."""
        return abs(self.re) + abs(self.im)

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i" if self.im != 1 else "i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        im_part = "i" if mag == 1 else f"{mag}*i"
        return f"({self.re}{sign}{im_part})"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(Fraction(1), Fraction(0))


class Polynomial3:
    """Sparse polynomial in x, y, z with GaussianRational coefficients.

    Instances are immutable in practice: operations return new polynomials
    and no stored coefficient is ever zero.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, GaussianRational] | None = None):
        cleaned: dict[Monomial, GaussianRational] = {}
        if terms:
            for mono, coeff in terms.items():
                c = GaussianRational.of(coeff)
                if c:
                    cleaned[mono] = c
        self.terms = cleaned

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Polynomial3":
        return Polynomial3()

    @staticmethod
    def constant(value: GaussianRational | RationalLike) -> "Polynomial3":
        return Polynomial3({(0, 0, 0): GaussianRational.of(value)})

    @staticmethod
    def variable(axis: int) -> "Polynomial3":
        mono = tuple(1 if a == axis else 0 for a in range(3))
        return Polynomial3({mono: GR_ONE})  # type: ignore[dict-item]

    @staticmethod
    def norm_squared() -> "Polynomial3":
        """x^2 + y^2 + z^2."""
        return Polynomial3({(2, 0, 0): GR_ONE, (0, 2, 0): GR_ONE, (0, 0, 2): GR_ONE})

    # -- basic structure ---------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial3):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    @property
    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(sum(m) for m in self.terms)

    @property
    def is_homogeneous(self) -> bool:
        degrees = {sum(m) for m in self.terms}
        return len(degrees) <= 1

    @property
    def is_real(self) -> bool:
        return all(c.is_real for c in self.terms.values())

    def require_real(self, context: str = "operation") -> None:
        if not self.is_real:
            raise ValueError(f"{context} requires real coefficients")

    def sorted_terms(self) -> list[tuple[Monomial, GaussianRational]]:
        """Terms in lexicographic (i, j, k) order, the canonical order."""
        return sorted(self.terms.items())

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Polynomial3") -> "Polynomial3":
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = out.get(mono, GR_ZERO) + coeff
        return Polynomial3(out)

    def __sub__(self, other: "Polynomial3") -> "Polynomial3":
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = out.get(mono, GR_ZERO) - coeff
        return Polynomial3(out)

    def __neg__(self) -> "Polynomial3":
        return Polynomial3({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "Polynomial3 | GaussianRational | RationalLike") -> "Polynomial3":
        if not isinstance(other, Polynomial3):
            scalar = GaussianRational.of(other)
            return Polynomial3({m: c * scalar for m, c in self.terms.items()})
        out: dict[Monomial, GaussianRational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                out[mono] = out.get(mono, GR_ZERO) + c1 * c2
        return Polynomial3(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial3":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial3.constant(1)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- calculus ----------------------------------------------------------

    def partial(self, axis: int) -> "Polynomial3":
        """Exact partial derivative with respect to x, y or z (axis 0, 1, 2)."""
        out: dict[Monomial, GaussianRational] = {}
        for mono, coeff in self.terms.items():
            e = mono[axis]
            if e == 0:
                continue
            new = list(mono)
            new[axis] = e - 1
            key = (new[0], new[1], new[2])
            out[key] = out.get(key, GR_ZERO) + coeff * GaussianRational.of(e)
        return Polynomial3(out)

    def laplacian(self) -> "Polynomial3":
        return (
            self.partial(0).partial(0)
            + self.partial(1).partial(1)
            + self.partial(2).partial(2)
        )

    @property
    def is_harmonic(self) -> bool:
        return not self.laplacian()

    # -- evaluation --------------------------------------------------------

    def evaluate(self, x, y, z):
        """Exact evaluation; with int/Fraction inputs the result is exact.

        Returns a GaussianRational when the coefficients are not all real,
        otherwise a plain Fraction (or int-valued Fraction).
        """
        total = GR_ZERO
        for (i, j, k), coeff in self.terms.items():
            val = Fraction(x) ** i * Fraction(y) ** j * Fraction(z) ** k
            total = total + coeff * GaussianRational.of(val)
        return total if not total.is_real else total.re

    def evaluate_float(self, x: float, y: float, z: float) -> float:
        self.require_real("float evaluation")
        total = 0.0
        for (i, j, k), coeff in self.terms.items():
            total += float(coeff.re) * x**i * y**j * z**k
        return total

    def evaluate_arrays(self, x, y, z):
        """Vectorized float evaluation on numpy arrays (real coefficients)."""
        self.require_real("array evaluation")
        total = None
        for (i, j, k), coeff in self.terms.items():
            term = float(coeff.re) * x**i * y**j * z**k
            total = term if total is None else total + term
        if total is None:
            return x * 0.0
        return total

    def integer_form(self) -> tuple[int, dict[Monomial, int]]:
        """Common denominator D and integer coefficients n_m with c_m = n_m / D."""
        self.require_real("integer form")
        denom = 1
        for c in self.terms.values():
            denom = denom * c.re.denominator // _gcd(denom, c.re.denominator)
        ints = {m: int(c.re * denom) for m, c in self.terms.items()}
        return denom, ints

    def coeff_l1(self) -> Fraction:
        """Sum of |re| + |im| over all coefficients."""
        return sum((c.l1_bound() for c in self.terms.values()), Fraction(0))

    # -- presentation ------------------------------------------------------

    def to_string(self) -> str:
        """Canonical expression string; parse_poly round-trips it exactly."""
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for (i, j, k), coeff in self.sorted_terms():
            factors = [
                f"{name}^{e}" if e > 1 else name
                for name, e in zip(VARIABLE_NAMES, (i, j, k))
                if e > 0
            ]
            body = "*".join(factors)
            if not coeff.is_real:
                coeff_str = str(coeff)  # parenthesized complex form
                piece = f"{coeff_str}*{body}" if body else coeff_str
                pieces.append("+" + piece if pieces else piece)
                continue
            c = coeff.re
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not body:
                piece = str(mag)
            elif mag == 1:
                piece = body
            else:
                piece = f"{mag}*{body}"
            if pieces:
                pieces.append(sign + piece)
            elif sign == "-":
                pieces.append("-" + piece)
            else:
                pieces.append(piece)
        return "".join(pieces)

    def canonical_lines(self) -> str:
        """Serialized form: one `coef i j k` line per monomial, lex-sorted."""
        lines = [f"{coeff} {i} {j} {k}" for (i, j, k), coeff in self.sorted_terms()]
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Polynomial3({self.to_string()!r})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- parsing ---------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        pos = self.pos
        text = self.text
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return ("end", "", pos)
        ch = text[pos]
        if ch.isdigit():
            end = pos
            while end < len(text) and text[end].isdigit():
                end += 1
            return ("number", text[pos:end], pos)
        if ch in "xyz":
            return ("variable", ch, pos)
        if ch == "i":
            return ("imag", ch, pos)
        if ch in "+-*^()/":
            return ("op", ch, pos)
        raise PolyParseError(f"unexpected character {ch!r}", pos)

    def next(self) -> tuple[str, str, int]:
        kind, value, pos = self.peek()
        self.pos = pos + len(value) if kind != "end" else pos
        return kind, value, pos


class _Parser:
    def __init__(self, text: str, degree_cap: int):
        self.tok = _Tokenizer(text)
        self.degree_cap = degree_cap

    def parse(self) -> Polynomial3:
        result = self._expr()
        kind, value, pos = self.tok.peek()
        if kind != "end":
            raise PolyParseError(f"unexpected {value!r}", pos)
        return result

    def _expr(self) -> Polynomial3:
        result = self._term()
        while True:
            kind, value, _ = self.tok.peek()
            if kind == "op" and value in "+-":
                self.tok.next()
                rhs = self._term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def _term(self) -> Polynomial3:
        result = self._factor()
        while True:
            kind, value, _ = self.tok.peek()
            if kind == "op" and value == "*":
                self.tok.next()
                result = self._check_cap(result * self._factor())
            else:
                return result

    def _factor(self) -> Polynomial3:
        base = self._atom()
        kind, value, pos = self.tok.peek()
        if kind == "op" and value == "^":
            self.tok.next()
            kind, value, pos = self.tok.next()
            if kind != "number":
                raise PolyParseError("expected integer exponent after '^'", pos)
            exponent = int(value)
            if base.degree * exponent > self.degree_cap:
                raise DegreeCapError(
                    f"exponent {exponent} exceeds degree cap {self.degree_cap}"
                )
            return self._check_cap(base**exponent)
        return base

    def _atom(self) -> Polynomial3:
        kind, value, pos = self.tok.next()
        if kind == "op" and value == "-":
            return -self._factor()
        if kind == "op" and value == "+":
            return self._factor()
        if kind == "number":
            return Polynomial3.constant(self._rational_tail(int(value)))
        if kind == "variable":
            return Polynomial3.variable("xyz".index(value))
        if kind == "imag":
            return Polynomial3.constant(GaussianRational(Fraction(0), Fraction(1)))
        if kind == "op" and value == "(":
            inner = self._expr()
            kind, value, pos = self.tok.next()
            if not (kind == "op" and value == ")"):
                raise PolyParseError("expected ')'", pos)
            return inner
        raise PolyParseError(
            "expected number, variable, 'i' or '('" if kind != "end" else "unexpected end of input",
            pos,
        )

    def _rational_tail(self, numerator: int) -> Fraction:
        kind, value, _ = self.tok.peek()
        if kind == "op" and value == "/":
            save = self.tok.pos
            self.tok.next()
            kind, value, pos = self.tok.peek()
            if kind == "number":
                self.tok.next()
                if int(value) == 0:
                    raise PolyParseError("zero denominator", pos)
                return Fraction(numerator, int(value))
            self.tok.pos = save  # '/' not part of a rational literal
        return Fraction(numerator)

    def _check_cap(self, p: Polynomial3) -> Polynomial3:
        if p.degree > self.degree_cap:
            raise DegreeCapError(
                f"degree {p.degree} exceeds degree cap {self.degree_cap}"
            )
        return p


def parse_poly(text: str, degree_cap: int = DEFAULT_DEGREE_CAP) -> Polynomial3:
    """Parse an expression in x, y, z with +, -, *, ^, parentheses and `i`.

    Rational literals are written p/q.  Raises PolyParseError with the
    offending position on bad syntax, DegreeCapError past the degree cap.
    """
    return _Parser(text, degree_cap).parse()


# -- sphere averages and harmonic decomposition ------------------------------


def _double_factorial(n: int) -> int:
    """(n)!! with the usual convention (-1)!! = 1."""
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def monomial_sphere_average(i: int, j: int, k: int) -> Fraction:
    """Average of x^i y^j z^k over the unit sphere (surface measure / 4pi)."""
    if i % 2 or j % 2 or k % 2:
        return Fraction(0)
    num = (
        _double_factorial(i - 1)
        * _double_factorial(j - 1)
        * _double_factorial(k - 1)
    )
    return Fraction(num, _double_factorial(i + j + k + 1))


def sphere_average(p: Polynomial3) -> Fraction:
    """(1/4pi) * integral of p over the unit sphere, exactly."""
    p.require_real("sphere average")
    total = Fraction(0)
    for (i, j, k), coeff in p.terms.items():
        total += coeff.re * monomial_sphere_average(i, j, k)
    return total


@dataclass(frozen=True)
class HarmonicDecomposition:
    """Parts (d, h_d) with h_d harmonic and p = sum of |x|^(2d) * h_d."""

    degree: int
    parts: tuple[tuple[int, Polynomial3], ...]

    def reconstruct(self) -> Polynomial3:
        r2 = Polynomial3.norm_squared()
        total = Polynomial3.zero()
        for d, component in self.parts:
            total = total + (r2**d) * component
        return total

    def component(self, d: int) -> Polynomial3:
        for dd, comp in self.parts:
            if dd == d:
                return comp
        return Polynomial3.zero()

    def __iter__(self) -> Iterator[tuple[int, Polynomial3]]:
        return iter(self.parts)


def harmonic_decompose(p: Polynomial3) -> HarmonicDecomposition:
    """Write a homogeneous p as sum over d of |x|^(2d) times a harmonic part.

    The decomposition is unique; it is found by peeling components from the
    top power of |x|^2 down, using that the d-th iterated Laplacian kills
    every component below d and acts diagonally on the rest.
    """
    if not p.is_homogeneous:
        raise ValueError("harmonic decomposition requires a homogeneous polynomial")
    nu = p.degree
    r2 = Polynomial3.norm_squared()
    remainder = p
    parts: list[tuple[int, Polynomial3]] = []
    for d in range(nu // 2, -1, -1):
        m = nu - 2 * d
        lap = remainder
        for _ in range(d):
            lap = lap.laplacian()
        scale = 1
        for t in range(d):
            # Laplacian of |x|^(2e) h_m is 2e(2e + 2m + 1) |x|^(2e-2) h_m in R^3
            e = d - t
            scale *= 2 * e * (2 * e + 2 * m + 1)
        component = lap * Fraction(1, scale)
        if component:
            parts.append((d, component))
            remainder = remainder - (r2**d) * component
    parts.reverse()
    return HarmonicDecomposition(degree=nu, parts=tuple(parts))
