"""Remainder in the count of primitive Pythagorean triangles (under RH).

Balancing ``N^{1/2} B^{-3/2}`` against ``N^{(s - 1/2)/2} B^{-2(s - 1)}`` with
``s = k + l`` gives the exponent ``theta(k, l)`` below; both branches increase
with ``s``, so the best pair minimises ``k + l`` on the hull.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..hull import build_hull
from ..numeric import as_fraction, format_fraction
from ..optimizer import FractionalObjective, minimize
from ..report import Report
from ._common import expected, floor_decimal

F = Fraction


def balance_exponent(s: Fraction) -> Fraction:
    """``log_N B = (s - 3/2)/(4s - 7)``."""
    return (s - F(3, 2)) / (4 * s - 7)


def theta_branches(p: Sequence[object]) -> tuple[Fraction, Fraction]:
    s = as_fraction(p[0]) + as_fraction(p[1])
    b = balance_exponent(s)
    return F(1, 3) - F(5, 6) * b, F(1, 2) - F(3, 2) * b


def theta(p: Sequence[object]) -> Fraction:
    return max(theta_branches(p))


def reproduce_pythagorean(n_max: int = 1000) -> Report:
    exp = expected()["pythagorean"]
    rep = Report("primitive Pythagorean triangles")
    h = build_hull(n_max)

    best = minimize(h, FractionalObjective((1, 1, 0)))
    want = (F(exp["argmin"][0]), F(exp["argmin"][1]))
    rep.add("k + l is minimised at (13/84, 55/84)", best.argmin == want,
            f"{format_fraction(best.argmin[0])}, {format_fraction(best.argmin[1])}")
    th = theta(best.argmin)
    rep.add("theta = 71/316", th == F(exp["theta"]), format_fraction(th))
    rep.add("theta = 0.22468...", floor_decimal(th, 5) == F(exp["decimal"]))
    rep.data["branches"] = [format_fraction(x) for x in theta_branches(best.argmin)]

    # the balancing choice of B equalises the first and third terms
    s = sum(best.argmin)
    b = balance_exponent(s)
    rep.add("B balances N^{1/2} B^{-3/2} and N^{(s-1/2)/2} B^{-2(s-1)}",
            F(1, 2) - F(3, 2) * b == (s - F(1, 2)) / 2 - 2 * (s - 1) * b)

    # monotonicity: over 1/2 <= s < 7/4 both branches increase
    vals = [theta((F(0), s)) for s in (F(j, 20) for j in range(10, 35))]
    rep.add("theta increases with k + l", all(a < b for a, b in zip(vals, vals[1:])))

    brute = min(h.vertices, key=theta)
    rep.add("brute force over the vertices agrees", theta(brute) == th)
    menzer = F(exp["menzer"])
    rep.add("improves on 1703927/7513108", th < menzer, f"{float(th):.6f} < {float(menzer):.6f}")
    ex = theta((F(1, 6), F(2, 3)))
    rep.data["theta_at_(1/6,2/3)"] = format_fraction(ex)
    rep.data["value"] = format_fraction(th)
    return rep
