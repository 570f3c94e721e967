"""Univariate polynomials and rational functions over the rationals.

Used for parametric optimisation: optimal values along a sweep are rational
functions of the parameter, and breakpoints are real roots of their
differences.  Roots are returned exactly when they are rational or quadratic
irrationals, otherwise as certified boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .numeric import CertInterval, QuadraticSurd, as_fraction

Root = Union[Fraction, QuadraticSurd, CertInterval]


class Poly:
    """Dense polynomial, coefficients stored lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[object] = ()) -> None:
        c = [as_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def const(cls, a: object) -> "Poly":
        return cls([a])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def lift(cls, a: object) -> "Poly":
        return a if isinstance(a, Poly) else cls([a])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __call__(self, t: object):
        if isinstance(t, (QuadraticSurd, CertInterval)):
            acc = QuadraticSurd(0) if isinstance(t, QuadraticSurd) else CertInterval.point(0)
            for a in reversed(self.c):
                acc = acc * t + a
            return acc
        t = as_fraction(t)
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * t + a
        return acc

    def __add__(self, other: object) -> "Poly":
        o = Poly.lift(other)
        n = max(len(self.c), len(o.c))
        a = self.c + (Fraction(0),) * (n - len(self.c))
        b = o.c + (Fraction(0),) * (n - len(o.c))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-x for x in self.c)

    def __sub__(self, other: object) -> "Poly":
        return self + (-Poly.lift(other))

    def __rsub__(self, other: object) -> "Poly":
        return Poly.lift(other) - self

    def __mul__(self, other: object) -> "Poly":
        o = Poly.lift(other)
        if not self.c or not o.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(o.c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly([1])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.c == other.c
        try:
            return self.c == Poly.lift(other).c
        except TypeError:
            return False

    def __hash__(self) -> int:
        return hash(self.c)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        q = [Fraction(0)] * max(0, len(rem) - len(other.c) + 1)
        lead = other.lead()
        dg = other.degree
        while len(rem) - 1 >= dg and rem:
            shift = len(rem) - 1 - dg
            f = rem[-1] / lead
            q[shift] = f
            for i, b in enumerate(other.c):
                rem[shift + i] -= f * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(q), Poly(rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def derivative(self) -> "Poly":
        return Poly(i * a for i, a in enumerate(self.c) if i > 0)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.lead()
        return Poly(a / lead for a in self.c)

    def compose_affine(self, a: object, b: object) -> "Poly":
        """``p(a + b*t)``."""
        inner = Poly([a, b])
        out = Poly()
        for coef in reversed(self.c):
            out = out * inner + coef
        return out

    def render(self, var: str = "t") -> str:
        if not self.c:
            return "0"
        parts: list[str] = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if a == 0:
                continue
            mag = abs(a)
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(body if a > 0 else f"-{body}")
            else:
                parts.append(("+ " if a > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self.render()})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def square_free(p: Poly) -> Poly:
    if p.degree <= 0:
        return p
    g = poly_gcd(p, p.derivative())
    return (p // g).monic() if g.degree > 0 else p.monic()


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)
    return seq


def _sign_changes(seq: Sequence[Poly], t: Fraction) -> int:
    signs = [s for s in ((v > 0) - (v < 0) for v in (q(t) for q in seq)) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Poly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in ``(lo, hi]`` of a square-free ``p``."""
    seq = sturm_sequence(p)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def _isolate(p: Poly, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(a, b]`` each holding exactly one root of ``p``."""
    seq = sturm_sequence(p)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, _sign_changes(seq, lo) - _sign_changes(seq, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        nm = _sign_changes(seq, m)
        stack.append((a, m, _sign_changes(seq, a) - nm))
        stack.append((m, b, nm - _sign_changes(seq, b)))
    out.sort()
    return out


def _refine(p: Poly, a: Fraction, b: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of a square-free polynomial."""
    if p(b) == 0:
        return b, b
    sb = p(b) > 0
    while b - a > width:
        m = (a + b) / 2
        v = p(m)
        if v == 0:
            return m, m
        if (v > 0) == sb:
            b = m
        else:
            a = m
    return a, b


def _recover_rational(p: Poly, a: Fraction, b: Fraction) -> Fraction | None:
    """Return the simplest fraction in ``[a, b]`` if it is a root of ``p``."""
    cand = a if a == b else _simplest_between(a, b)
    if cand is not None and p(cand) == 0:
        return cand
    return None


def _simplest_between(a: Fraction, b: Fraction) -> Fraction | None:
    if a > b:
        a, b = b, a
    fl = math.floor(a)
    if fl == a:
        return Fraction(fl)
    if fl + 1 <= b:
        return Fraction(fl + 1)
    inner = _simplest_between(1 / (b - fl), 1 / (a - fl))
    if inner is None or inner == 0:
        return None
    return fl + 1 / inner


def _quadratic_roots(p: Poly) -> list[Root]:
    c0, c1, c2 = p.c
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    s = QuadraticSurd.sqrt(disc)
    r1 = (-c1 - s) / (2 * c2) if c2 > 0 else (-c1 + s) / (2 * c2)
    r2 = (-c1 + s) / (2 * c2) if c2 > 0 else (-c1 - s) / (2 * c2)
    out: list[Root] = []
    for r in (r1, r2):
        out.append(r.to_fraction() if r.is_rational else r)
    return out


def real_roots(p: Poly, lo: object, hi: object, box_width: object = Fraction(1, 10 ** 15)) -> list[Root]:
    """All distinct real roots of ``p`` in the closed interval ``[lo, hi]``, ascending.

    Rational roots are returned as Fractions, quadratic irrationals as
    :class:`QuadraticSurd`, and anything else as a :class:`CertInterval` of
    width at most ``box_width`` certified to hold exactly one root.
    """
    lo, hi = as_fraction(lo), as_fraction(hi)
    box_width = as_fraction(box_width)
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    q = square_free(p)
    roots: list[Root] = []
    if q.degree <= 0:
        return roots
    if q(lo) == 0:
        roots.append(lo)
    rational: list[Fraction] = []
    pending: list[tuple[Fraction, Fraction]] = []
    for a, b in _isolate(q, lo, hi):
        a2, b2 = _refine(q, a, b, Fraction(1, 1 << 80))
        r = _recover_rational(q, a2, b2)
        if r is not None:
            rational.append(r)
        else:
            pending.append((a, b))
    rest = q
    for r in rational:
        rest = rest // Poly([-r, 1])
    if rest.degree == 2 and pending:
        for r in _quadratic_roots(rest):
            if isinstance(r, QuadraticSurd) and lo <= r <= hi:
                roots.append(r)
    else:
        for a, b in pending:
            a2, b2 = _refine(q, a, b, box_width)
            roots.append(CertInterval(a2, b2))
    roots.extend(r for r in rational if r != lo)
    return sorted(roots, key=_root_key)


def _root_key(r: Root) -> Fraction:
    if isinstance(r, CertInterval):
        return r.lo
    if isinstance(r, QuadraticSurd):
        return r.enclose(96).lo
    return r


@dataclass(frozen=True)
class RationalFunction:
    """``num(t) / den(t)`` with polynomial numerator and denominator."""

    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")

    @classmethod
    def const(cls, a: object) -> "RationalFunction":
        return cls(Poly([a]), Poly([1]))

    def __call__(self, t: object):
        d = self.den(t)
        if isinstance(d, CertInterval):
            return self.num(t) / d
        if isinstance(d, QuadraticSurd):
            return self.num(t) / d
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {t}")
        return self.num(t) / d

    @classmethod
    def lift(cls, a: object) -> "RationalFunction":
        if isinstance(a, RationalFunction):
            return a
        if isinstance(a, Poly):
            return cls(a, Poly([1]))
        return cls.const(a)

    def __add__(self, other: object) -> "RationalFunction":
        o = self.lift(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: object) -> "RationalFunction":
        return self + (-self.lift(other))

    def __rsub__(self, other: object) -> "RationalFunction":
        return self.lift(other) - self

    def __mul__(self, other: object) -> "RationalFunction":
        o = self.lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RationalFunction":
        o = self.lift(other)
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other: object) -> "RationalFunction":
        return self.lift(other) / self

    def same_as(self, other: "RationalFunction") -> bool:
        """Exact identity as rational functions (cross-multiplication)."""
        return (self.num * other.den - other.num * self.den).is_zero()

    def crossing_poly(self, other: "RationalFunction") -> Poly:
        return self.num * other.den - other.num * self.den

    def normalized(self) -> "RationalFunction":
        """Cancel common factors and make the denominator monic."""
        g = poly_gcd(self.num, self.den) if not self.num.is_zero() else self.den.monic()
        if g.degree > 0:
            num, den = self.num // g, self.den // g
        else:
            num, den = self.num, self.den
        lead = den.lead()
        return RationalFunction(Poly(a / lead for a in num.c), Poly(a / lead for a in den.c))

    def render(self, var: str = "t") -> tuple[str, str]:
        r = self.normalized()
        return r.num.render(var), r.den.render(var)

    def __repr__(self) -> str:
        n, d = self.render()
        return f"({n}) / ({d})"
