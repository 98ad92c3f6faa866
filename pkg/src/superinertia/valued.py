"""Exact valued arithmetic.

Elements of the ground field are modelled by Laurent polynomials in ``t``
over the rationals with the ``t``-adic valuation.  Valuations are
``fractions.Fraction`` values, and ``math.inf`` plays the role of the
valuation of zero (it compares above every Fraction and absorbs addition).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .errors import InputParseError, UltrametricViolation

INF = math.inf


def is_infinite(x) -> bool:
    return x == INF


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"3/2"`` or ``"0.25"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputParseError(f"not a rational: {x!r}") from exc
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_value(x) -> str:
    """Serialize an extended value: ``"inf"`` or ``"a/b"`` / ``"a"``."""
    if is_infinite(x):
        return "inf"
    return str(Fraction(x))


def parse_value(text) -> Fraction | float:
    if isinstance(text, str) and text.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    return as_rational(text)


# ---------------------------------------------------------------------------
# Laurent polynomials

_TERM = re.compile(
    r"""
    (?P<sign>[+-])?\s*
    (?:
        (?P<coef>\d+(?:\.\d*)?(?:/\d+)?|\.\d+)
        (?:\s*\*\s*(?P<tc>t)(?:\s*\^\s*(?P<ec>\(?[+-]?\d+\)?))?)?
      |
        (?P<tb>t)(?:\s*\^\s*(?P<eb>\(?[+-]?\d+\)?))?
    )
    \s*""",
    re.VERBOSE,
)


class LaurentPoly:
    """Finite Laurent polynomial ``sum c_e t^e`` with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, coefficients: Mapping[int, object] | None = None):
        terms = {}
        for exp, coef in (coefficients or {}).items():
            c = as_rational(coef)
            if c:
                terms[int(exp)] = terms.get(int(exp), Fraction(0)) + c
        self._terms = tuple(sorted((e, c) for e, c in terms.items() if c))

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent: int, c=1) -> "LaurentPoly":
        return cls({exponent: c})

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    def coefficient(self, exponent: int) -> Fraction:
        return dict(self._terms).get(exponent, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def valuation(self):
        return laurent_valuation(self)

    def __add__(self, other):
        other = _coerce(other)
        acc = dict(self._terms)
        for e, c in other._terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly(acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        acc: dict[int, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers need inverse(precision)")
        out = LaurentPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self, precision: int) -> "LaurentPoly":
        """Truncated power-series inverse, exact in degrees below ``precision``.

        Writing ``self = c t^v (1 + u)`` with ``v(u) > 0``, the result is
        ``c^-1 t^-v (1 - u + u^2 - ...)`` cut off at exponent ``precision``.
        """
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        v, lead = self._terms[0]
        unit_tail = LaurentPoly({e - v: c / lead for e, c in self._terms[1:]})
        # each power of the tail gains at least one degree
        precision = int(precision)
        keep = precision + v
        result = LaurentPoly.constant(1)
        power = LaurentPoly.constant(1)
        for _ in range(max(keep, 0) + 1):
            power = (power * -unit_tail).truncate(keep)
            if power.is_zero():
                break
            result = result + power
        return (result.truncate(keep) * LaurentPoly.monomial(-v, 1 / lead)).truncate(precision)

    def truncate(self, below: int) -> "LaurentPoly":
        """Drop all terms with exponent >= ``below``."""
        return LaurentPoly({e: c for e, c in self._terms if e < below})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self)!r})"

    def __str__(self):
        return format_laurent(self)


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.constant(x)


T = LaurentPoly.monomial(1)


def laurent_valuation(f: LaurentPoly):
    """Minimal exponent with a nonzero coefficient; ``inf`` for zero."""
    if f.is_zero():
        return INF
    return Fraction(f.terms[0][0])


def parse_laurent(text: str) -> LaurentPoly:
    """Parse a signed sum of terms ``c``, ``c*t^e``, ``t^e`` (``t`` alone allowed).

    ``c`` is a decimal or a fraction ``a/b``.  Raises InputParseError.
    """
    if not isinstance(text, str):
        raise InputParseError(f"expected a string, got {text!r}")
    src = text.strip()
    if not src:
        raise InputParseError("empty polynomial")
    pos = 0
    acc: dict[int, Fraction] = {}
    first = True
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos or (not first and not m.group("sign")):
            raise InputParseError(f"cannot parse {text!r} near position {pos}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("coef") is not None:
            coef = as_rational(m.group("coef"))
            if m.group("tc"):
                exp = _exponent(m.group("ec"))
            else:
                exp = 0
        else:
            coef = Fraction(1)
            exp = _exponent(m.group("eb"))
        acc[exp] = acc.get(exp, 0) + sign * coef
        pos = m.end()
        first = False
    return LaurentPoly(acc)


def _exponent(raw: str | None) -> int:
    if raw is None:
        return 1
    return int(raw.strip("()"))


def format_laurent(f: LaurentPoly) -> str:
    """Canonical text form; ``parse_laurent(format_laurent(f)) == f``."""
    if f.is_zero():
        return "0"
    pieces = []
    for k, (e, c) in enumerate(f.terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = str(mag)
        elif mag == 1:
            body = f"t^{e}"
        else:
            body = f"{mag}*t^{e}"
        if k == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


# ---------------------------------------------------------------------------
# Valuation matrices

@dataclass(frozen=True)
class ValMatrix:
    """Symmetric matrix of pairwise valuations among labelled finite points.

    ``infinity`` names the point that has been moved to infinity, if any;
    it is not one of ``labels``.
    """

    labels: tuple[str, ...]
    values: tuple[tuple[object, ...], ...]
    infinity: str | None = None

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise InputParseError("duplicate point labels")
        if len(self.values) != n or any(len(row) != n for row in self.values):
            raise InputParseError("valuation matrix is not square / does not match labels")
        for i in range(n):
            if not is_infinite(self.values[i][i]):
                raise InputParseError(f"diagonal entry {i} must be inf")
            for j in range(i + 1, n):
                if self.values[i][j] != self.values[j][i]:
                    raise InputParseError(f"matrix not symmetric at ({i}, {j})")
                if is_infinite(self.values[i][j]):
                    raise InputParseError(f"off-diagonal entry ({i}, {j}) is inf")

    @classmethod
    def from_rows(cls, labels: Sequence[str], rows, infinity=None) -> "ValMatrix":
        vals = tuple(tuple(parse_value(x) if isinstance(x, str) else
                           (INF if is_infinite(x) else as_rational(x)) for x in row)
                     for row in rows)
        return cls(tuple(labels), vals, infinity)

    def __len__(self):
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def v(self, i: int, j: int):
        return self.values[i][j]

    def rows_as_text(self) -> list[list[str]]:
        return [[format_value(x) for x in row] for row in self.values]


def build_val_matrix(roots: Sequence[LaurentPoly], labels: Sequence[str] | None = None) -> ValMatrix:
    """Pairwise valuations ``v(z_i - z_j)`` for distinct Laurent roots."""
    n = len(roots)
    labels = tuple(labels) if labels is not None else tuple(f"z{i}" for i in range(n))
    for i, j in combinations(range(n), 2):
        if roots[i] == roots[j]:
            raise InputParseError(f"branch points {labels[i]} and {labels[j]} coincide")
    rows = [[INF] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        rows[i][j] = rows[j][i] = laurent_valuation(roots[i] - roots[j])
    return ValMatrix(labels, tuple(map(tuple, rows)))


def find_ultrametric_violation(M: ValMatrix):
    """First triple whose minimum is attained only once, or None."""
    n = len(M)
    for a, b, c in combinations(range(n), 3):
        vals = (M.v(a, b), M.v(b, c), M.v(a, c))
        low = min(vals)
        if sum(1 for x in vals if x == low) < 2:
            return (a, b, c), vals
    return None


def validate_ultrametric(M: ValMatrix) -> None:
    found = find_ultrametric_violation(M)
    if found is not None:
        (a, b, c), vals = found
        names = (M.labels[a], M.labels[b], M.labels[c])
        shown = ", ".join(format_value(x) for x in vals)
        raise UltrametricViolation(
            f"triple {names} has valuations ({shown}); minimum attained once",
            triple=names, values=vals)


def moebius_to_infinity(M: ValMatrix, b: str, infinity_label: str | None = None) -> ValMatrix:
    """Apply ``z -> 1/(z - z_b)``: ``b`` goes to infinity.

    Valuations transform as ``v'(i,j) = v(i,j) - v(i,b) - v(j,b)``.  A point
    previously at infinity lands at 0 and gets ``v'(i, old) = -v(i, b)``.
    """
    if b == M.infinity:
        raise ValueError(f"{b} is already the point at infinity")
    ib = M.index(b)
    keep = [k for k in range(len(M)) if k != ib]
    labels = [M.labels[k] for k in keep]
    n = len(keep)
    has_old = M.infinity is not None
    size = n + (1 if has_old else 0)
    rows = [[INF] * size for _ in range(size)]
    for x, i in enumerate(keep):
        for y, j in enumerate(keep):
            if x != y:
                rows[x][y] = M.v(i, j) - M.v(i, ib) - M.v(j, ib)
        if has_old:
            rows[x][n] = rows[n][x] = -M.v(i, ib)
    if has_old:
        labels.append(M.infinity)
    return ValMatrix(tuple(labels), tuple(map(tuple, rows)), infinity_label or b)


# ---------------------------------------------------------------------------
# Small invariants

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def genus(p: int, h: int) -> int:
    """Genus ``(p-1) h`` of ``y^p = f(x)`` with ``2h+2`` branch points (one at infinity)."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if h < 1:
        raise ValueError("h must be at least 1")
    return (p - 1) * h


def legendre_j_valuation(alpha0: LaurentPoly, alpha1: LaurentPoly, beta1: LaurentPoly):
    """Valuation of the j-invariant of ``y^2 = (x-alpha0)(x-alpha1)(x-beta1)``.

    With ``a = beta1 - alpha1`` and ``b = alpha0 - alpha1`` the Legendre
    parameter is ``a/b`` and ``j = 256 (a^2 - ab + b^2)^3 / (a^2 b^2 (a-b)^2)``,
    so the valuation is a difference of two polynomial valuations.
    """
    a = _coerce(beta1) - _coerce(alpha1)
    b = _coerce(alpha0) - _coerce(alpha1)
    denominator = a * a * b * b * (a - b) * (a - b)
    if denominator.is_zero():
        raise ValueError("degenerate cubic: repeated roots")
    numerator = 256 * (a * a - a * b + b * b) ** 3
    if numerator.is_zero():
        return INF
    return laurent_valuation(numerator) - laurent_valuation(denominator)


def tube_radius(p: int, vp) -> Fraction:
    """``p v(p) / (p - 1)``, the radius of the tubes around the axes."""
    return Fraction(p) * as_rational(vp) / (p - 1)


# ---------------------------------------------------------------------------
# Branch data

def point_labels(h: int) -> tuple[str, ...]:
    """Finite branch points in index order: alpha0, alpha1, beta1, ..., alphah, betah."""
    out = ["alpha0"]
    for i in range(1, h + 1):
        out += [f"alpha{i}", f"beta{i}"]
    return tuple(out)


def alpha_index(i: int) -> int:
    return 0 if i == 0 else 2 * i - 1


def beta_index(i: int) -> int:
    if i == 0:
        raise ValueError("beta0 is the point at infinity")
    return 2 * i


@dataclass(frozen=True)
class BranchConfig:
    """Data of ``y^p = (x - alpha0)^m0 prod_i (x - alpha_i)^m_i (x - beta_i)^(p - m_i)``.

    ``beta0`` sits at infinity.  ``roots`` is set in Laurent mode (then
    ``vp`` must be 0); ``matrix`` is always present.
    """

    p: int
    vp: Fraction
    exponents: tuple[int, ...]
    matrix: ValMatrix
    roots: tuple[LaurentPoly, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputParseError(f"p = {self.p} is not prime")
        object.__setattr__(self, "vp", as_rational(self.vp))
        if self.vp < 0:
            raise InputParseError("vp must be non-negative")
        h = len(self.exponents) - 1
        if h < 1:
            raise InputParseError("need at least one pair (alpha_i, beta_i) with i >= 1")
        m0 = self.exponents[0]
        if not 1 <= m0 <= self.p - 1:
            raise InputParseError(f"m0 = {m0} must lie in [1, p-1]")
        for i, m in enumerate(self.exponents[1:], start=1):
            if not 1 <= m <= self.p - m:
                raise InputParseError(f"m{i} = {m} must satisfy 1 <= m <= p - m")
        if len(self.matrix) != 2 * h + 1:
            raise InputParseError(f"expected {2 * h + 1} finite branch points, got {len(self.matrix)}")
        if self.roots is not None:
            if self.vp != 0:
                raise InputParseError("Laurent mode has residue characteristic 0, so vp must be 0")
            if len(self.roots) != 2 * h + 1:
                raise InputParseError("root count does not match the exponents")

    @property
    def h(self) -> int:
        return len(self.exponents) - 1

    @property
    def mode(self) -> str:
        return "laurent" if self.roots is not None else "matrix"

    @property
    def tube(self) -> Fraction:
        return tube_radius(self.p, self.vp)

    @property
    def genus(self) -> int:
        return genus(self.p, self.h)

    @classmethod
    def from_roots(cls, p: int, roots: Sequence[LaurentPoly], exponents=None) -> "BranchConfig":
        h = (len(roots) - 1) // 2
        if len(roots) != 2 * h + 1:
            raise InputParseError("need an odd number 2h+1 of finite branch points")
        roots = tuple(_coerce(r) for r in roots)
        exponents = tuple(exponents) if exponents is not None else (1,) * (h + 1)
        matrix = build_val_matrix(roots, point_labels(h))
        return cls(p, Fraction(0), exponents, matrix, roots)

    @classmethod
    def from_matrix(cls, p: int, vp, matrix: ValMatrix, exponents=None) -> "BranchConfig":
        h = (len(matrix) - 1) // 2
        exponents = tuple(exponents) if exponents is not None else (1,) * (h + 1)
        return cls(p, as_rational(vp), exponents, matrix)
