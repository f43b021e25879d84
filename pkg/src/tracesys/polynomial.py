"""Univariate polynomials with exact rational coefficients, and real root brackets.

Root isolation uses Sturm sequences of the square-free part followed by
dyadic bisection, so every bracket is certified by exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import InputError

Number = Union[int, Fraction]

DEFAULT_WIDTH = Fraction(1, 10**12)


def to_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` / decimal strings exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational number: {value!r}") from None
    if isinstance(value, float):
        raise InputError(f"floats are not exact; pass {value!r} as a string")
    raise InputError(f"not a rational number: {value!r}")


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Polynomial:
    """Immutable polynomial in ``z``; ``coeffs[k]`` is the coefficient of ``z**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Polynomial":
        return cls([0] * degree + [c])

    @property
    def degree(self):
        """Degree, with ``float('-inf')`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Polynomial"):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            q = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return Polynomial(quot), Polynomial(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return Polynomial([c / lead for c in self.coeffs])

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree(self) -> "Polynomial":
        """Product of the distinct irreducible factors, made monic."""
        if self.is_constant():
            return self.monic()
        return (self // self.gcd(self.derivative())).monic()

    def to_strings(self) -> list:
        return [format_fraction(c) for c in self.coeffs] or ["0"]

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = format_fraction(mag)
            else:
                coef = "" if mag == 1 else format_fraction(mag)
                if coef and "/" in coef:
                    coef = f"({coef})"
                body = coef + ("z" if k == 1 else f"z^{k}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Polynomial({self})"


Z = Polynomial([0, 1])
ONE = Polynomial([1])


def sturm_sequence(p: Polynomial) -> list:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _sign_changes(seq: Sequence[Polynomial], x: Fraction) -> int:
    changes = 0
    last = 0
    for q in seq:
        v = q(x)
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if last and s != last:
            changes += 1
        last = s
    return changes


def count_roots(seq: Sequence[Polynomial], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the half-open interval ``(lo, hi]``."""
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


@dataclass(frozen=True)
class RootBracket:
    """A real root of ``poly`` isolated in ``[lo, hi]``, or the marker for ∞.

    ``lo == hi`` means the root is the exact rational ``lo``.
    """

    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    poly: Optional[Polynomial] = field(default=None, compare=False, repr=False)

    @property
    def infinite(self) -> bool:
        return self.lo is None

    @property
    def exact(self) -> bool:
        return not self.infinite and self.lo == self.hi

    @property
    def width(self) -> Fraction:
        if self.infinite:
            raise ValueError("infinite root has no width")
        return self.hi - self.lo

    def contains(self, q) -> bool:
        if self.infinite:
            return False
        q = to_fraction(q)
        return self.lo <= q <= self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float("inf") if self.infinite else float(self.midpoint())

    def refine(self, width: Fraction) -> "RootBracket":
        """Bisect until the bracket is no wider than ``width``."""
        if self.infinite or self.exact or self.width <= width:
            return self
        seq = sturm_sequence(self.poly)
        lo, hi = self.lo, self.hi
        while hi - lo > width:
            mid = (lo + hi) / 2
            if self.poly(mid) == 0 and count_roots(seq, lo, mid) == 1:
                return RootBracket(mid, mid, self.poly)
            if count_roots(seq, lo, mid) >= 1:
                hi = mid
            else:
                lo = mid
        return _finish(lo, hi, self.poly, seq)

    def to_json(self) -> dict:
        if self.infinite:
            return {"infinite": True}
        return {"lo": format_fraction(self.lo), "hi": format_fraction(self.hi)}

    def __str__(self):
        if self.infinite:
            return "∞"
        if self.exact:
            return format_fraction(self.lo)
        return f"[{format_fraction(self.lo)}, {format_fraction(self.hi)}] ≈ {float(self):.12g}"


INFINITE_ROOT = RootBracket()


def _finish(lo, hi, poly, seq) -> RootBracket:
    if poly(hi) == 0 and count_roots(seq, lo, hi) == 1:
        return RootBracket(hi, hi, poly)
    return RootBracket(lo, hi, poly)


def _smallest_in(poly: Polynomial, seq, lo: Fraction, hi: Fraction, width: Fraction) -> RootBracket:
    # invariant: no root in (start, lo], at least one root in (lo, hi]
    while hi - lo > width:
        mid = (lo + hi) / 2
        if count_roots(seq, lo, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return _finish(lo, hi, poly, seq)


def smallest_root(p: Polynomial, width: Fraction = DEFAULT_WIDTH) -> RootBracket:
    """Smallest positive real root of ``p`` as an exact rational bracket.

    Roots in ``(0, 1]`` are searched first.  A polynomial with no positive
    real root (in particular a nonzero constant) yields :data:`INFINITE_ROOT`.
    """
    if p.is_zero():
        raise InputError("the zero polynomial has no smallest root")
    if p(0) == 0:
        raise InputError("p(0) must be nonzero")
    if p.is_constant():
        return INFINITE_ROOT
    q = p.squarefree()
    seq = sturm_sequence(q)
    one = Fraction(1)
    if count_roots(seq, Fraction(0), one) >= 1:
        return _smallest_in(q, seq, Fraction(0), one, width)
    # Cauchy bound on root moduli
    bound = 1 + max(abs(c / q.leading) for c in q.coeffs[:-1])
    if count_roots(seq, one, bound) >= 1:
        return _smallest_in(q, seq, one, bound, width)
    return INFINITE_ROOT


def compare_roots(r: RootBracket, s: RootBracket, max_bits: int = 400) -> int:
    """Exact three-way comparison of two brackets: -1, 0 or 1."""
    if r.infinite or s.infinite:
        return (r.infinite > s.infinite) - (r.infinite < s.infinite)
    if r.exact and s.exact:
        return (r.lo > s.lo) - (r.lo < s.lo)
    g = r.poly.gcd(s.poly)
    g_seq = None if g.is_constant() else sturm_sequence(g)
    width = max(r.width, s.width)
    for _ in range(max_bits):
        if r.hi < s.lo:
            return -1
        if s.hi < r.lo:
            return 1
        if g_seq is not None and _isolated(r) and _isolated(s):
            # both brackets hold exactly one root; they coincide iff a common root lies in the overlap
            lo, hi = max(r.lo, s.lo), min(r.hi, s.hi)
            if g(lo) == 0 or count_roots(g_seq, lo, hi) >= 1:
                return 0
        width /= 2
        r, s = r.refine(width), s.refine(width)
    raise ArithmeticError("root comparison did not separate the brackets")


def _isolated(b: RootBracket) -> bool:
    return b.exact or count_roots(sturm_sequence(b.poly), b.lo, b.hi) == 1


def root_equals(r: RootBracket, value) -> bool:
    """Whether the bracketed root equals the rational ``value`` (or ∞ for ``None``)."""
    if value is None:
        return r.infinite
    if r.infinite:
        return False
    value = to_fraction(value)
    return r.contains(value) and r.poly(value) == 0


def parse_polynomial(doc) -> Polynomial:
    if not isinstance(doc, dict) or "coeffs" not in doc:
        raise InputError('polynomial JSON must be an object with a "coeffs" list')
    coeffs = doc["coeffs"]
    if not isinstance(coeffs, list):
        raise InputError('"coeffs" must be a list', "coeffs")
    out = []
    for k, c in enumerate(coeffs):
        try:
            out.append(to_fraction(c))
        except InputError as exc:
            raise InputError(str(exc), f"coeffs[{k}]") from None
    return Polynomial(out)


def polynomial_to_json(p: Polynomial) -> dict:
    return {"coeffs": p.to_strings()}


def determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Fraction-free (Bareiss) determinant of a square polynomial matrix."""
    n = len(matrix)
    if n == 0:
        return Polynomial([1])
    m = [[matrix[i][j] if isinstance(matrix[i][j], Polynomial) else Polynomial([matrix[i][j]])
          for j in range(n)] for i in range(n)]
    if any(len(row) != n for row in m):
        raise InputError("determinant needs a square matrix")
    sign = 1
    prev = Polynomial([1])
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Polynomial()
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]).exact_div(prev)
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det
