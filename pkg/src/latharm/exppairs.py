"""Exact exponent-pair calculus and minimax balancing of error exponents.

Everything here is exact rational arithmetic: the A/B processes on exponent
pairs, the long- and short-sum error-term templates, and the piecewise-linear
minimax solver that balances them by choosing the smoothing width H = R^alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


@dataclass(frozen=True)
class ExponentPair:
    """Pair (k, l) with 0 <= k <= 1/2 <= l <= 1; eps marks a '+eps' pair."""

    k: Fraction
    l: Fraction
    eps: bool = False

    def __post_init__(self) -> None:
        if not (0 <= self.k <= Fraction(1, 2) <= self.l <= 1):
            raise ValueError(f"invalid exponent pair ({self.k}, {self.l})")

    def __str__(self) -> str:
        suffix = " (+eps)" if self.eps else ""
        return f"{self.k},{self.l}{suffix}"


# Pairs with established names; eps records whether the source estimate
# carries an epsilon in the exponent.
KNOWN_PAIRS: dict[str, ExponentPair] = {
    "trivial": ExponentPair(Fraction(0), Fraction(1)),
    "classic": ExponentPair(Fraction(1, 2), Fraction(1, 2)),
    "bombieri-iwaniec": ExponentPair(Fraction(9, 56), Fraction(37, 56), eps=True),
    "huxley": ExponentPair(Fraction(32, 205), Fraction(269, 410), eps=True),
    "lindelof": ExponentPair(Fraction(0), Fraction(1, 2), eps=True),
}


def pair_A(p: ExponentPair) -> ExponentPair:
    """Weyl-differencing step: (k, l) -> (k/(2k+2), (k+l+1)/(2k+2))."""
    denom = 2 * p.k + 2
    return ExponentPair(p.k / denom, (p.k + p.l + 1) / denom, eps=p.eps)


def pair_B(p: ExponentPair) -> ExponentPair:
    """Poisson/stationary-phase step: (k, l) -> (l - 1/2, k + 1/2)."""
    return ExponentPair(p.l - Fraction(1, 2), p.k + Fraction(1, 2), eps=p.eps)


def pair_apply_word(word: str, p: ExponentPair) -> ExponentPair:
    """Apply a process word, rightmost letter first, so BA2 = B after A, A.

    Accepts e.g. "BA2", "BA^2", "AB"; digits repeat the preceding letter.
    """
    steps: list[str] = []
    i = 0
    while i < len(word):
        ch = word[i]
        if ch.isspace():
            i += 1
            continue
        if ch not in "AaBb":
            raise ValueError(f"bad process word {word!r}: unexpected {ch!r}")
        letter = ch.upper()
        i += 1
        if i < len(word) and word[i] == "^":
            i += 1
        count = 0
        while i < len(word) and word[i].isdigit():
            count = count * 10 + int(word[i])
            i += 1
        steps.extend(letter * max(count, 1))
    result = p
    for letter in reversed(steps):
        result = pair_A(result) if letter == "A" else pair_B(result)
    return result


@dataclass(frozen=True)
class ErrorTerm:
    """Formal error term R^a H^b, exponents exact rationals."""

    r_exp: Fraction
    h_exp: Fraction
    label: str = ""
    eps: bool = False

    def at(self, alpha: Fraction) -> Fraction:
        """Exponent of R when H = R^alpha."""
        return self.r_exp + self.h_exp * alpha

    def __str__(self) -> str:
        return self.label or format_term(self.r_exp, self.h_exp)


def format_term(r_exp: Fraction, h_exp: Fraction) -> str:
    if r_exp == 0 and h_exp == 0:
        return "1"
    parts = []
    if r_exp != 0:
        parts.append("R" if r_exp == 1 else f"R^{r_exp}")
    if h_exp != 0:
        parts.append("H" if h_exp == 1 else f"H^{h_exp}")
    return "".join(parts) or "1"


def term(r_exp, h_exp, eps: bool = False) -> ErrorTerm:
    r, h = Fraction(r_exp), Fraction(h_exp)
    return ErrorTerm(r, h, label=format_term(r, h), eps=eps)


def long_sum_terms(p: ExponentPair) -> list[ErrorTerm]:
    """Smoothed-sum error terms produced by an exponent pair (k, l).

    The second exponent specializes to R^(17/14) H^(-1/7) at (1/2, 1/2).
    """
    denom = 4 * p.k + 2 * p.l + 4
    return [
        term(1, Fraction(-1, 2)),
        term(1 + (p.k + 1) / denom, -(p.k + 3 * p.l - 1) / denom, eps=p.eps),
    ]


SHORT_SUM_MODELS: dict[str, list[ErrorTerm]] = {
    # boundary-shell estimates: trivial counting, character-sum bounds,
    # the cusp-form coefficient bound, and two conjectural strengths
    "trivial": [term(2, 1)],
    "CI": [term(Fraction(15, 8), Fraction(7, 8))],
    "HB": [term(Fraction(11, 6), Fraction(5, 6))],
    "cusp": [term(Fraction(15, 8), 1), term(1, 0)],
    "GLH": [term(Fraction(3, 2), Fraction(1, 2))],
    "RC": [term(Fraction(3, 2), 1)],
}


def short_sum_terms(model: str) -> list[ErrorTerm]:
    try:
        return list(SHORT_SUM_MODELS[model])
    except KeyError:
        raise ValueError(
            f"unknown short-sum model {model!r}; choose from {sorted(SHORT_SUM_MODELS)}"
        ) from None


@dataclass(frozen=True)
class BalanceResult:
    """Optimal alpha = log H / log R and the resulting error exponent."""

    alpha: Fraction
    theta: Fraction
    active_terms: tuple[str, ...]

    def __str__(self) -> str:
        active = ", ".join(self.active_terms)
        return f"theta={self.theta} at alpha={self.alpha} (active: {active})"


def balance(
    long_terms: Sequence[ErrorTerm],
    short_terms: Sequence[ErrorTerm],
    alpha_range: tuple[Fraction, Fraction] = (Fraction(-1), Fraction(0)),
) -> BalanceResult:
    """Minimize max over terms of (a + b*alpha) exactly on a closed range.

    The objective is convex piecewise linear with rational breakpoints, so the
    minimum is attained at a range endpoint or a pairwise intersection; all
    candidates are evaluated exactly and ties break toward the largest alpha.
    """
    terms = list(long_terms) + list(short_terms)
    if not long_terms or not short_terms:
        raise ValueError("balance needs nonempty long and short term lists")
    lo, hi = Fraction(alpha_range[0]), Fraction(alpha_range[1])
    if lo > hi:
        raise ValueError("empty alpha range")

    def objective(alpha: Fraction) -> Fraction:
        return max(t.at(alpha) for t in terms)

    candidates = {lo, hi}
    for i, t1 in enumerate(terms):
        for t2 in terms[i + 1 :]:
            if t1.h_exp != t2.h_exp:
                cross = (t2.r_exp - t1.r_exp) / (t1.h_exp - t2.h_exp)
                if lo <= cross <= hi:
                    candidates.add(cross)

    best_alpha = max(
        candidates, key=lambda a: (-objective(a), a)
    )  # min objective, then largest alpha
    theta = objective(best_alpha)
    active = tuple(str(t) for t in terms if t.at(best_alpha) == theta)
    return BalanceResult(alpha=best_alpha, theta=theta, active_terms=active)


def theta_formula(p: ExponentPair) -> Fraction:
    """Closed-form error exponent 1 + max(7/24, (15k+21l+1)/(40k+40l+24))."""
    k, l = p.k, p.l
    branch = (15 * k + 21 * l + 1) / (40 * k + 40 * l + 24)
    return 1 + max(Fraction(7, 24), branch)


@dataclass(frozen=True)
class TableRow:
    """One row of the summary table of proved and conjectured exponents."""

    long_label: str
    short_label: str
    long_terms: tuple[ErrorTerm, ...]
    short_terms: tuple[ErrorTerm, ...]
    theta: Fraction
    alpha: Fraction
    applicability: str
    marks: int  # number of question marks carried by the source row

    def marks_suffix(self) -> str:
        return "?" * self.marks


def _terms_label(terms: Iterable[ErrorTerm], marks: int = 0) -> str:
    suffix = "?" * marks
    return " + ".join(str(t) for t in terms) + suffix


_CI_LONG = [
    term(1, Fraction(-1, 2)),
    term(Fraction(11, 8), Fraction(1, 8)),
    term(Fraction(21, 16), 0),
]


def _row_definitions() -> list[tuple[str, list[ErrorTerm], str, str, int]]:
    classic = long_sum_terms(KNOWN_PAIRS["classic"])
    huxley_ba2 = long_sum_terms(pair_apply_word("BA2", KNOWN_PAIRS["huxley"]))
    huxley_raw = long_sum_terms(KNOWN_PAIRS["huxley"])
    lep = long_sum_terms(KNOWN_PAIRS["lindelof"])
    return [
        ("Van der Corput", [term(1, -1)], "trivial", "all P", 0),
        ("Chen; Vinogradov", [term(1, Fraction(-1, 2))], "trivial", "all P", 0),
        ("Chamizo-Iwaniec", _CI_LONG, "CI", "P = 1", 0),
        ("Chamizo-Iwaniec", _CI_LONG, "HB", "P = 1", 0),
        ("classic pair", classic, "cusp", "mean-zero P", 0),
        ("Huxley pair BA2", huxley_ba2, "cusp", "mean-zero P", 0),
        ("Lindelof pair", lep, "cusp", "mean-zero P", 2),
        ("classic pair", classic, "GLH", "P = 1", 2),
        ("Lindelof pair", lep, "GLH", "P = 1", 2),
        ("classic pair", classic, "RC", "mean-zero P", 2),
        ("Huxley pair", huxley_raw, "RC", "mean-zero P", 2),
        ("Lindelof pair", lep, "RC", "mean-zero P", 2),
    ]


def exponent_table() -> list[TableRow]:
    """Regenerate the twelve summary rows through the balancing engine."""
    rows = []
    for long_label, long_terms_, short_model, applicability, marks in _row_definitions():
        short_terms_ = short_sum_terms(short_model)
        result = balance(long_terms_, short_terms_)
        rows.append(
            TableRow(
                long_label=f"{_terms_label(long_terms_)} ({long_label})",
                short_label=f"{_terms_label(short_terms_)} ({short_model})",
                long_terms=tuple(long_terms_),
                short_terms=tuple(short_terms_),
                theta=result.theta,
                alpha=result.alpha,
                applicability=applicability,
                marks=marks,
            )
        )
    return rows


def table_csv(rows: Sequence[TableRow] | None = None) -> str:
    rows = exponent_table() if rows is None else rows
    lines = ["long,short,theta,alpha,marks"]
    for r in rows:
        lines.append(
            f"\"{r.long_label}\",\"{r.short_label}\",{r.theta},{r.alpha},{r.marks}"
        )
    return "\n".join(lines) + "\n"


def table_text(rows: Sequence[TableRow] | None = None) -> str:
    """Aligned plain-text rendering of the summary table."""
    rows = exponent_table() if rows is None else rows
    header = ("Long sum", "Short sum", "theta", "alpha", "applies to")
    body = [
        (
            r.long_label,
            r.short_label,
            f"{r.theta}{r.marks_suffix()} ({float(r.theta):.5f})",
            f"{r.alpha}{r.marks_suffix()} ({float(r.alpha):.5f})",
            r.applicability,
        )
        for r in rows
    ]
    widths = [
        max(len(header[i]), *(len(row[i]) for row in body)) for i in range(len(header))
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    lines.append("conjectured best: theta = 1 (open)")
    return "\n".join(lines) + "\n"


def parse_pair(text: str, eps: bool | None = None) -> ExponentPair:
    """Parse 'k,l' with rational entries; eps defaults from the known-pair list."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError("expected 'k,l'")
    k, l = (Fraction(s.strip()) for s in parts)
    if eps is None:
        eps = any(p.k == k and p.l == l and p.eps for p in KNOWN_PAIRS.values())
    return ExponentPair(k, l, eps=eps)


def parse_terms(text: str) -> list[ErrorTerm]:
    """Parse 'a,b;a,b;...' exponent pairs, or a named short-sum model."""
    if text in SHORT_SUM_MODELS:
        return short_sum_terms(text)
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected 'a,b' in term {chunk!r}")
        out.append(term(Fraction(parts[0]), Fraction(parts[1])))
    if not out:
        raise ValueError("empty term list")
    return out
