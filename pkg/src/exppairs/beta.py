"""Bounds on beta(alpha) and the exponent pairs dual to their convex hull.

A bound ``beta(alpha) <= A + B*alpha`` on ``[X, Y]`` corresponds to the line
``beta = k + (l - k)*alpha`` of an exponent pair ``(k, l)``.  Taking the upper
convex hull of a piecewise bound and reading off the supporting lines of
consecutive vertices produces new pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import Point, cross
from .numeric import as_fraction, format_fraction
from .pairs import A_MAP, B_MAP, COMBINED, ExponentPair, enumerate_known_pairs

F = Fraction
HALF = F(1, 2)


class EnvelopeGapError(ValueError):
    """Consecutive bounds do not abut, or the ranges do not cover [0, 1/2]."""


@dataclass(frozen=True)
class BetaBound:
    """``beta(alpha) <= A + B*alpha`` for ``X <= alpha <= Y``."""

    A: Fraction
    B: Fraction
    X: Fraction
    Y: Fraction
    source: str = ""

    def __post_init__(self) -> None:
        for name in ("A", "B", "X", "Y"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not (0 <= self.X < self.Y <= HALF):
            raise ValueError(f"bad range [{self.X}, {self.Y}]")
        if self.A < 0:
            raise ValueError(f"negative intercept {self.A}")

    def __call__(self, alpha: object) -> Fraction:
        return self.A + self.B * as_fraction(alpha)

    def endpoints(self) -> tuple[Point, Point]:
        return (self.X, self(self.X)), (self.Y, self(self.Y))


@dataclass(frozen=True)
class BetaEnvelope:
    """Bounds ordered by range, abutting exactly and covering ``[0, 1/2]``."""

    bounds: tuple[BetaBound, ...]

    def __post_init__(self) -> None:
        bs = tuple(self.bounds)
        if not bs:
            raise EnvelopeGapError("empty envelope")
        if bs[0].X != 0 or bs[-1].Y != HALF:
            raise EnvelopeGapError("envelope must cover [0, 1/2]")
        for i, (a, b) in enumerate(zip(bs, bs[1:])):
            if a.Y != b.X:
                raise EnvelopeGapError(f"rows {i + 1} and {i + 2} do not abut: {a.Y} != {b.X}")
        object.__setattr__(self, "bounds", bs)

    def __len__(self) -> int:
        return len(self.bounds)

    def __iter__(self):
        return iter(self.bounds)

    def value(self, alpha: object) -> Fraction:
        """``beta_0(alpha)``: the smallest applicable bound (both rows apply at a breakpoint)."""
        a = as_fraction(alpha)
        vals = [b(a) for b in self.bounds if b.X <= a <= b.Y]
        if not vals:
            raise ValueError(f"alpha = {a} outside [0, 1/2]")
        return min(vals)

    def discontinuities(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """Breakpoints where adjacent rows disagree: ``(alpha, left value, right value)``."""
        out = []
        for a, b in zip(self.bounds, self.bounds[1:]):
            if a(a.Y) != b(b.X):
                out.append((a.Y, a(a.Y), b(b.X)))
        return out


_TABLE3 = (
    ("13/414", "359/414", "0", "2848/12173", "A^2(k0)"),
    ("13/318", "253/318", "2848/12173", "161/646", ""),
    ("11/492", "107/123", "161/646", "19/74", ""),
    ("89/2706", "2243/2706", "19/74", "199/716", ""),
    ("29/600", "58/75", "199/716", "967/3428", ""),
    ("49/1614", "1351/1614", "967/3428", "120/419", ""),
    ("1/66", "235/264", "120/419", "1328/4447", ""),
    ("13/194", "139/194", "1328/4447", "104/343", "A(k0)"),
    ("13/146", "47/73", "104/343", "87/275", ""),
    ("11/244", "191/244", "87/275", "423/1295", ""),
    ("89/1282", "454/641", "423/1295", "227/601", ""),
    ("29/280", "173/280", "227/601", "12/31", ""),
    ("1/32", "103/128", "12/31", "1508/3825", ""),
    ("18/199", "521/796", "1508/3825", "62831/155153", "sargos"),
    ("569/2800", "1053/2800", "62831/155153", "143/349", ""),
    ("491/5530", "1812/2765", "143/349", "263/638", ""),
    ("113/1345", "897/1345", "263/638", "1673/4038", ""),
    ("2/9", "1/3", "1673/4038", "5/12", ""),
    ("1/12", "2/3", "5/12", "3/7", ""),
    ("13/84", "1/2", "3/7", "1/2", "k0"),
)


def table3_envelope(corrected: bool = False) -> BetaEnvelope:
    """The tabulated piecewise bound on ``[0, 1/2]`` (20 rows).

    The first row is printed with slope 359/414, which is the ``l`` of its
    source pair A(A(13/84, 55/84)) = (13/414, 359/414) rather than the slope
    ``l - k = 173/207`` of that pair's line.  ``corrected=True`` substitutes
    173/207.
    """
    rows = []
    for i, (a, b, x, y, src) in enumerate(_TABLE3):
        if corrected and i == 0:
            b = "173/207"
        rows.append(BetaBound(F(a), F(b), F(x), F(y), src))
    return BetaEnvelope(tuple(rows))


def envelope_from_json(text: str) -> BetaEnvelope:
    rows = json.loads(text)
    return BetaEnvelope(tuple(BetaBound(F(r["A"]), F(r["B"]), F(r["X"]), F(r["Y"]), r.get("source", ""))
                              for r in rows))


def envelope_hull(env: BetaEnvelope) -> list[Point]:
    """Upper convex chain of the piece endpoints together with ``(0, 0)`` and ``(1/2, 0)``.

    Returns the chain from ``alpha = 0`` to ``alpha = 1/2`` without the two
    floor anchors; collinear points are dropped.
    """
    pts: set[Point] = {(F(0), F(0)), (HALF, F(0))}
    for b in env:
        pts.update(b.endpoints())
    ordered = sorted(pts)
    upper: list[Point] = []
    for p in ordered:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) >= 0:
            upper.pop()
        upper.append(p)
    # the chain starts at the top point over alpha = 0
    top0 = max(p for p in ordered if p[0] == 0)
    chain = [p for p in upper if p[1] > 0 or p == top0]
    if chain[0] != top0:
        chain.insert(0, top0)
    return chain


@dataclass(frozen=True)
class DualPair:
    pair: ExponentPair
    segment: tuple[Point, Point]
    known_as: str | None  # matching catalog word, None if new
    admissible: bool


def _known_pairs() -> dict[Point, str]:
    """Catalog pairs (without the dual-construction family) closed under words of length <= 3."""
    combined = set(COMBINED)
    base = [p for p in enumerate_known_pairs(family_cap=20)
            if isinstance(p, ExponentPair) and p.point not in combined]
    known: dict[Point, str] = {}
    frontier = [(p.point, p.provenance) for p in base]
    for pt, tag in frontier:
        known.setdefault(pt, tag)
    for _ in range(3):
        nxt = []
        for pt, tag in frontier:
            for name, pm in (("A", A_MAP), ("B", B_MAP)):
                img = pm(pt)
                if img not in known:
                    known[img] = f"{name}({tag})"
                    nxt.append((img, known[img]))
        frontier = nxt
    return known


def dual_pairs(chain: Sequence[Point], known: dict[Point, str] | None = None) -> list[DualPair]:
    """One pair per chain edge: ``k`` is the edge line's intercept, ``l = k + slope``."""
    known = _known_pairs() if known is None else known
    out: list[DualPair] = []
    for p, q in zip(chain, chain[1:]):
        if p[0] == q[0]:
            raise ValueError(f"vertical chain segment at alpha = {p[0]}")
        s = (q[1] - p[1]) / (q[0] - p[0])
        k = p[1] - s * p[0]
        pair = ExponentPair(k, k + s, eps=True, provenance="beta-dual")
        out.append(DualPair(pair, (p, q), known.get(pair.point), pair.is_admissible()))
    return out


def dual_report(env: BetaEnvelope | None = None) -> dict:
    env = table3_envelope() if env is None else env
    chain = envelope_hull(env)
    duals = dual_pairs(chain)
    return {
        "rows": len(env),
        "discontinuities": [[format_fraction(a), format_fraction(l), format_fraction(r)]
                            for a, l, r in env.discontinuities()],
        "chain": [[format_fraction(a), format_fraction(b)] for a, b in chain],
        "pairs": [{"k": format_fraction(d.pair.k), "l": format_fraction(d.pair.l),
                   "known_as": d.known_as, "admissible": d.admissible} for d in duals],
    }


def dominates(pair: ExponentPair, env: BetaEnvelope, alphas: Iterable[Fraction]) -> bool:
    """The pair's line lies on or above the envelope at every sample."""
    return all(pair.k + (pair.l - pair.k) * a >= env.value(a) for a in alphas)
