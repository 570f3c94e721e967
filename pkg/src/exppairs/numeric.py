"""Exact and certified numerics.

Rationals are plain :class:`fractions.Fraction` values.  On top of them this
module provides

* :class:`QuadraticSurd` -- numbers ``p + q*sqrt(r)`` with rational ``p, q``
  and a non-square integer ``r``, with exact sign and field arithmetic;
* :class:`CertInterval` -- closed intervals with rational endpoints whose
  operations always return an enclosure of the true result;
* certified ``log``, square root, integer roots and rational powers.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction

DEFAULT_PRECISION_BITS = 128


def default_precision_bits() -> int:
    """Precision used by certified transcendental operations.

    Read from ``EXPPAIR_PRECISION_BITS`` when set, else 128.
    """
    raw = os.environ.get("EXPPAIR_PRECISION_BITS")
    if raw is None or raw.strip() == "":
        return DEFAULT_PRECISION_BITS
    bits = int(raw)
    if bits < 8:
        raise ValueError(f"EXPPAIR_PRECISION_BITS must be >= 8, got {bits}")
    return bits


def as_fraction(x: object) -> Fraction:
    """Convert ints, Fractions and ``"num/den"`` strings to Fraction.

    Floats are rejected: they would silently inject rounding error.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_fraction(x: Fraction) -> str:
    """Serialise as ``"num/den"`` (integers keep a ``/1`` suffix)."""
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- integer helpers ---------------------------------------------------------

def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    s = math.isqrt(n)
    return s * s == n


def iroot_floor(n: int, k: int) -> int:
    """Largest integer ``x >= 0`` with ``x**k <= n``."""
    if n < 0:
        raise ValueError("iroot_floor needs n >= 0")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def _ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(x * (1 << bits)), 1 << bits)


# -- quadratic surds ---------------------------------------------------------

class SurdMismatchError(ValueError):
    """Raised when combining surds over incompatible radicands."""


class QuadraticSurd:
    """The real number ``p + q*sqrt(r)``.

    ``r`` is a non-negative integer.  A perfect-square radicand (or ``q == 0``)
    collapses the value to a rational with ``q = 0, r = 0``.
    """

    __slots__ = ("p", "q", "r")

    def __init__(self, p: object = 0, q: object = 0, r: int = 0) -> None:
        p = as_fraction(p)
        q = as_fraction(q)
        if not isinstance(r, int) or r < 0:
            raise ValueError(f"radicand must be a non-negative int, got {r!r}")
        if q != 0 and is_perfect_square(r):
            p, q, r = p + q * math.isqrt(r), Fraction(0), 0
        if q == 0:
            r = 0
        self.p, self.q, self.r = p, q, r

    @classmethod
    def sqrt(cls, x: object) -> "QuadraticSurd":
        """Exact square root of a non-negative rational."""
        x = as_fraction(x)
        if x < 0:
            raise ValueError("square root of a negative rational")
        num, den = x.numerator, x.denominator
        # sqrt(num/den) = sqrt(num*den)/den
        return cls(0, Fraction(1, den), num * den)

    # basic predicates
    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def to_fraction(self) -> Fraction:
        if self.q != 0:
            raise ValueError(f"{self} is irrational")
        return self.p

    def sign(self) -> int:
        return surd_sign(self)

    # coercion -----------------------------------------------------------
    def _coerce(self, other: object) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            return other
        return QuadraticSurd(as_fraction(other))

    def _align(self, other: "QuadraticSurd") -> tuple["QuadraticSurd", "QuadraticSurd", int]:
        """Rewrite both operands over a common radicand."""
        a, b = self, other
        if a.q == 0 or b.q == 0 or a.r == b.r:
            return a, b, max(a.r, b.r)
        prod = a.r * b.r
        if is_perfect_square(prod):
            # sqrt(rb) = sqrt(ra*rb)/ra * sqrt(ra)
            factor = Fraction(math.isqrt(prod), a.r)
            return a, QuadraticSurd(b.p, b.q * factor, a.r), a.r
        raise SurdMismatchError(f"radicands {a.r} and {b.r} are not commensurable")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: object) -> "QuadraticSurd":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b, r = self._align(o)
        return QuadraticSurd(a.p + b.p, a.q + b.q, r)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticSurd":
        return QuadraticSurd(-self.p, -self.q, self.r)

    def __sub__(self, other: object) -> "QuadraticSurd":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "QuadraticSurd":
        return (-self) + other

    def __mul__(self, other: object) -> "QuadraticSurd":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b, r = self._align(o)
        return QuadraticSurd(a.p * b.p + a.q * b.q * r, a.p * b.q + a.q * b.p, r)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.p, -self.q, self.r)

    def norm(self) -> Fraction:
        """``(p + q sqrt r)(p - q sqrt r)``, a rational."""
        return self.p * self.p - self.q * self.q * self.r

    def __truediv__(self, other: object) -> "QuadraticSurd":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.q == 0:
            if o.p == 0:
                raise ZeroDivisionError("division by zero surd")
            return QuadraticSurd(self.p / o.p, self.q / o.p, self.r)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        top = self * o.conjugate()
        return QuadraticSurd(top.p / n, top.q / n, top.r)

    def __rtruediv__(self, other: object) -> "QuadraticSurd":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "QuadraticSurd":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return QuadraticSurd(1) / (self ** (-n))
        out = QuadraticSurd(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparisons -----------------------------------------------------------
    def _cmp(self, other: object) -> int:
        return surd_sign(self - other)

    def __eq__(self, other: object) -> bool:
        try:
            return self._cmp(other) == 0
        except (TypeError, SurdMismatchError):
            return False

    def __hash__(self) -> int:
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.r))

    def __lt__(self, other: object) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: object) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: object) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: object) -> bool:
        return self._cmp(other) >= 0

    # approximation -----------------------------------------------------------
    def enclose(self, bits: int | None = None) -> "CertInterval":
        """A rational interval of width at most ``2**-bits`` around the value."""
        bits = default_precision_bits() if bits is None else bits
        if self.q == 0:
            return CertInterval(self.p, self.p)
        # enclose sqrt(r) with enough extra bits to absorb |q|
        extra = max(0, abs(self.q).numerator.bit_length() - abs(self.q).denominator.bit_length() + 2)
        root = CertInterval.point(self.r).sqrt(bits + extra)
        return (CertInterval.point(self.p) + CertInterval.point(self.q) * root)

    def __float__(self) -> float:
        iv = self.enclose(64)
        return float((iv.lo + iv.hi) / 2)

    def __repr__(self) -> str:
        if self.q == 0:
            return f"QuadraticSurd({self.p})"
        return f"QuadraticSurd({self.p}, {self.q}, {self.r})"

    def __str__(self) -> str:
        if self.q == 0:
            return str(self.p)
        sign = "+" if self.q > 0 else "-"
        return f"{self.p} {sign} {abs(self.q)}*sqrt({self.r})"


Number = Union[Fraction, QuadraticSurd]


def surd_sign(x: object) -> int:
    """Exact sign (-1, 0, 1) of a rational or quadratic surd.

    When ``p`` and ``q`` have opposite signs, compare ``p**2`` with
    ``q**2 * r``; the larger magnitude decides.
    """
    if not isinstance(x, QuadraticSurd):
        v = as_fraction(x)
        return (v > 0) - (v < 0)
    sp = (x.p > 0) - (x.p < 0)
    sq = (x.q > 0) - (x.q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    lhs = x.p * x.p
    rhs = x.q * x.q * x.r
    if lhs > rhs:
        return sp
    if lhs < rhs:
        return sq
    return 0


# -- certified intervals ---------------------------------------------------------

@dataclass(frozen=True)
class CertInterval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: object) -> "CertInterval":
        v = as_fraction(x)
        return cls(v, v)

    @classmethod
    def hull(cls, *items: "CertInterval") -> "CertInterval":
        return cls(min(i.lo for i in items), max(i.hi for i in items))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: object) -> bool:
        if isinstance(x, CertInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, QuadraticSurd):
            return x >= self.lo and x <= self.hi
        v = as_fraction(x)
        return self.lo <= v <= self.hi

    __contains__ = contains

    def intersects(self, other: "CertInterval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def round_out(self, bits: int) -> "CertInterval":
        """Widen to dyadic endpoints with denominator ``2**bits``."""
        return CertInterval(_floor_dyadic(self.lo, bits), _ceil_dyadic(self.hi, bits))

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"CertInterval({float(self.lo)!r}, {float(self.hi)!r})"

    # arithmetic -----------------------------------------------------------
    @staticmethod
    def _lift(x: object) -> "CertInterval":
        if isinstance(x, CertInterval):
            return x
        if isinstance(x, QuadraticSurd):
            return x.enclose()
        return CertInterval.point(x)

    def __add__(self, other: object) -> "CertInterval":
        o = self._lift(other)
        return CertInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "CertInterval":
        return CertInterval(-self.hi, -self.lo)

    def __sub__(self, other: object) -> "CertInterval":
        o = self._lift(other)
        return CertInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other: object) -> "CertInterval":
        return self._lift(other) - self

    def __mul__(self, other: object) -> "CertInterval":
        o = self._lift(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return CertInterval(min(prods), max(prods))

    __rmul__ = __mul__

    def reciprocal(self) -> "CertInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError(f"interval {self!r} contains zero")
        return CertInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other: object) -> "CertInterval":
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other: object) -> "CertInterval":
        return self._lift(other) * self.reciprocal()

    def __pow__(self, n: int) -> "CertInterval":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (self ** (-n)).reciprocal()
        if n == 0:
            return CertInterval.point(1)
        a, b = self.lo ** n, self.hi ** n
        if n % 2 == 0 and self.lo <= 0 <= self.hi:
            return CertInterval(Fraction(0), max(a, b))
        return CertInterval(min(a, b), max(a, b))

    # certified elementary functions ------------------------------------------
    def root(self, k: int, bits: int | None = None) -> "CertInterval":
        """Enclosure of the real ``k``-th root (``k >= 1``) of a non-negative interval."""
        if k < 1:
            raise ValueError("root order must be >= 1")
        if self.lo < 0:
            raise ValueError(f"root of interval with negative part {self!r}")
        bits = default_precision_bits() if bits is None else bits
        return CertInterval(_root_floor(self.lo, k, bits), _root_ceil(self.hi, k, bits))

    def sqrt(self, bits: int | None = None) -> "CertInterval":
        return self.root(2, bits)

    def rpow(self, exponent: object, bits: int | None = None) -> "CertInterval":
        """``x**(a/b)`` for positive ``x`` and rational exponent ``a/b``."""
        e = as_fraction(exponent)
        if self.lo <= 0 and e.denominator != 1:
            raise ValueError("rational powers need a strictly positive base")
        powered = self ** e.numerator
        if e.denominator == 1:
            return powered
        return powered.root(e.denominator, bits)

    def log(self, bits: int | None = None) -> "CertInterval":
        return interval_log(self, bits)


def _root_floor(x: Fraction, k: int, bits: int) -> Fraction:
    scale = 1 << (bits * k)
    return Fraction(iroot_floor((x.numerator * scale) // x.denominator, k), 1 << bits)


def _root_ceil(x: Fraction, k: int, bits: int) -> Fraction:
    scale = 1 << (bits * k)
    n = -((-x.numerator * scale) // x.denominator)
    r = iroot_floor(n, k)
    if r ** k < n:
        r += 1
    return Fraction(r, 1 << bits)


# -- certified logarithm ---------------------------------------------------------

def _atanh_bounds(z: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Bounds on ``atanh(z)`` for a rational ``0 <= z <= 1/2``.

    Partial sums of ``sum z**(2j+1)/(2j+1)`` are lower bounds; the tail is at
    most ``z**(2K+1) / ((2K+1)(1 - z**2))``.
    """
    if z == 0:
        return Fraction(0), Fraction(0)
    target = Fraction(1, 1 << (bits + 2))
    z2 = z * z
    term = z
    total = Fraction(0)
    j = 0
    while True:
        total += term / (2 * j + 1)
        j += 1
        term *= z2
        tail = term / ((2 * j + 1) * (1 - z2))
        if tail <= target:
            return total, total + tail


def _log2_bounds(bits: int) -> tuple[Fraction, Fraction]:
    lo, hi = _atanh_bounds(Fraction(1, 3), bits + 4)
    return 2 * lo, 2 * hi


def _log_rational_bounds(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    if x <= 0:
        raise ValueError(f"log of non-positive value {x}")
    if x == 1:
        return Fraction(0), Fraction(0)
    # x = 2**e * y with y in [1, 2)
    e = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / Fraction(2) ** e
    if y < 1:
        e -= 1
        y *= 2
    if y > Fraction(4, 3):
        # recentre y into [2/3, 4/3] so z stays small
        e += 1
        y /= 2
    guard = bits + 8 + max(1, abs(e)).bit_length()
    z = (y - 1) / (y + 1)
    neg = z < 0
    z_lo = _floor_dyadic(abs(z), guard + 4)
    z_hi = _ceil_dyadic(abs(z), guard + 4)
    a_lo, _ = _atanh_bounds(z_lo, guard)
    _, a_hi = _atanh_bounds(z_hi, guard)
    ly_lo, ly_hi = 2 * a_lo, 2 * a_hi
    if neg:
        ly_lo, ly_hi = -ly_hi, -ly_lo
    l2_lo, l2_hi = _log2_bounds(guard)
    if e >= 0:
        lo, hi = ly_lo + e * l2_lo, ly_hi + e * l2_hi
    else:
        lo, hi = ly_lo + e * l2_hi, ly_hi + e * l2_lo
    return _floor_dyadic(lo, bits), _ceil_dyadic(hi, bits)


def interval_log(x: object, precision_bits: int | None = None) -> CertInterval:
    """Certified enclosure of ``log(x)`` for a positive rational or interval.

    The result has dyadic endpoints at ``precision_bits`` and contains the
    exact value; its width is at most a few units of ``2**-precision_bits``
    beyond the width induced by the input.
    """
    bits = default_precision_bits() if precision_bits is None else precision_bits
    iv = x if isinstance(x, CertInterval) else CertInterval.point(as_fraction(x))
    if iv.lo <= 0:
        raise ValueError(f"log of interval with non-positive part {iv!r}")
    lo, _ = _log_rational_bounds(iv.lo, bits)
    _, hi = _log_rational_bounds(iv.hi, bits)
    return CertInterval(lo, hi)


def enclose(x: object, bits: int | None = None) -> CertInterval:
    """Interval enclosure of a rational, surd or interval."""
    if isinstance(x, CertInterval):
        return x
    if isinstance(x, QuadraticSurd):
        return x.enclose(bits)
    return CertInterval.point(as_fraction(x))


def approx(x: object) -> float:
    """Float approximation for display only."""
    if isinstance(x, (QuadraticSurd, CertInterval)):
        return float(x)
    return float(as_fraction(x))


def compare(a: object, b: object) -> int:
    """Exact three-way comparison of rationals and surds."""
    if isinstance(a, CertInterval) or isinstance(b, CertInterval):
        ia, ib = enclose(a), enclose(b)
        if ia.hi < ib.lo:
            return -1
        if ia.lo > ib.hi:
            return 1
        raise ValueError("interval comparison is undecided at current precision")
    if isinstance(a, QuadraticSurd):
        return surd_sign(a - b)
    if isinstance(b, QuadraticSurd):
        return -surd_sign(b - a)
    fa, fb = as_fraction(a), as_fraction(b)
    return (fa > fb) - (fa < fb)
