"""Moments of zeta on the critical line: M(A) tables and the hybrid moment.

``M(A)`` bounds come from ``M(A) <= A/4 - 1/(2k)`` over pairs with
``4 + (2 + 4l)/k = A``; along an edge of the hull this is linear in ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..hull import build_hull, vertex
from ..numeric import CertInterval, QuadraticSurd, as_fraction, format_fraction
from ..optimizer import AffineConstraint, FractionalObjective, PiecewiseBound, minimize, sweep
from ..pairs import B_MAP, vinogradov_pair
from ..polynomial import Poly, RationalFunction
from ..report import Report
from ._common import (TablePiece, ceil_decimal, digits_of, evaluate, expected, linear_piece, table_rows)

F = Fraction
THETA0 = F(13, 84)


def moment_edge_bound(p1: Sequence[object], p2: Sequence[object]) -> tuple[RationalFunction, tuple[Fraction, Fraction]]:
    """Bound on ``M(A)`` from the pairs on the segment joining ``p1`` and ``p2``.

    Returns the bound as a (linear) function of ``A`` and the ``A``-range it
    is valid on.  The expression is symmetric in the two pairs.
    """
    k1, l1 = as_fraction(p1[0]), as_fraction(p1[1])
    k2, l2 = as_fraction(p2[0]), as_fraction(p2[1])
    if k1 == k2:
        raise ValueError("the two pairs have the same k; the edge is vertical")
    if k1 > k2:
        (k1, l1), (k2, l2) = (k2, l2), (k1, l1)
    den = 2 * (2 * k1 * l2 - 2 * k2 * l1 + k1 - k2)
    expr = RationalFunction(Poly([2 * (k1 - k2 + l1 - l2) / den, (k1 * l2 - k2 * l1) / den]), Poly([1]))
    lo = 4 + (2 + 4 * l2) / k2
    hi = 4 + (2 + 4 * l1) / k1
    return expr, (lo, hi)


def final_piece(theta: Fraction = THETA0) -> RationalFunction:
    """``1 + theta*(A - 6)``, valid for ``A >= 8 + 4/theta``."""
    return RationalFunction(Poly([1 - 6 * theta, theta]), Poly([1]))


def moment_objective(a: Fraction) -> FractionalObjective:
    """``A/4 - 1/(2k)`` written as ``(A/4*k - 1/2)/k``."""
    return FractionalObjective((a / 4, 0, F(-1, 2)), (1, 0, 0))


def moment_constraints(a: Fraction) -> list[AffineConstraint]:
    """``4 + (2 + 4l)/k = A``, i.e. ``(A - 4)k - 4l = 2``."""
    return [AffineConstraint(a - 4, -4, 2, "==")]


def moment_bound_at(a: object, n_max: int = 1000) -> Fraction:
    """Best bound on ``M(A)`` from a single pair of ``H_N``."""
    af = as_fraction(a)
    return minimize(build_hull(n_max), moment_objective(af), moment_constraints(af)).value


@dataclass
class MomentTable:
    pieces: list[TablePiece]
    sweep: PiecewiseBound | None = None
    report: Report = field(default_factory=lambda: Report("M(A) table"))

    def __call__(self, a: object) -> Fraction:
        return evaluate(self.pieces, a)

    @property
    def breakpoints(self) -> list[Fraction]:
        return [p.lo for p in self.pieces]

    def rows(self) -> list[dict]:
        return table_rows(self.pieces, "A")


def _theta_checks(rep: Report, theta: Fraction) -> None:
    # (sqrt(13) - 3)/4 <= theta < 1/4 and 1/(2 theta) - 2 theta <= 3
    lower = QuadraticSurd(F(-3, 4), F(1, 4), 13)
    rep.add("theta lower limit (sqrt13 - 3)/4 < 13/84", lower < theta, f"{float(lower):.6f} < {float(theta):.6f}")
    rep.add("theta < 1/4", theta < F(1, 4))
    rep.add("1/(2 theta) - 2 theta <= 3", 1 / (2 * theta) - 2 * theta <= 3,
            format_fraction(1 / (2 * theta) - 2 * theta))
    rep.add("(theta, theta + 1/2) is the vertex k_0", vertex(0) == (theta, theta + F(1, 2)))


def reproduce_moment_table(n_max: int = 1000, use_sweep: bool = True, samples: int = 32) -> MomentTable:
    """The twelve edge pieces for ``n = -10..1`` followed by the linear tail."""
    exp = expected()["moments_large_A"]
    rep = Report("M(A) for A >= 866/65")
    pieces: list[TablePiece] = []
    for n in range(-10, 2):
        expr, (lo, hi) = moment_edge_bound(vertex(n + 1), vertex(n))
        pieces.append(TablePiece(lo, hi, expr, None))
    tail = final_piece()
    last = pieces[-1]
    cross = (last.value.num - tail.num).c
    a_star = -cross[0] / cross[1]
    rep.add("tail crossover inside last edge range", last.lo < a_star <= last.hi, format_fraction(a_star))
    rep.add("tail valid: crossover >= 8 + 4/theta", a_star >= 8 + 4 / THETA0)
    pieces[-1] = TablePiece(last.lo, a_star, last.value)
    pieces.append(TablePiece(a_star, None, tail))

    printed = exp["pieces"]
    rep.add("piece count", len(pieces) == len(printed), f"{len(pieces)} vs {len(printed)}")
    for i, (p, row) in enumerate(zip(pieces, printed)):
        want = linear_piece(row)
        lo = F(row["lo"])
        hi = None if row["hi"] is None else F(row["hi"])
        rep.add(f"piece {i + 1} expression", p.value.same_as(want),
                f"{p.value.render('A')[0]} vs {want.render('A')[0]}")
        rep.add(f"piece {i + 1} range", p.lo == lo and p.hi == hi,
                f"[{format_fraction(p.lo)}, {'inf' if p.hi is None else format_fraction(p.hi)})")
    for a, b in zip(pieces, pieces[1:]):
        rep.add(f"continuity at {format_fraction(b.lo)}", a.value(b.lo) == b.value(b.lo))

    # the tail is the better bound beyond the crossover
    step = F(5)
    for j in range(10):
        a = a_star + j * step
        edge = moment_bound_at(a, n_max)
        rep.add(f"tail dominates at A = {format_fraction(a)}", tail(a) <= edge)

    for a_str, printed_dec in exp["spot_values"].items():
        a = F(a_str)
        d = digits_of(printed_dec)
        if a >= pieces[0].lo:
            v = evaluate(pieces, a)
            ok = ceil_decimal(v, d) == F(printed_dec)
            detail = f"exact {format_fraction(v)} = {float(v):.6f}"
        else:
            iv = moment_near_12(a)
            ok = ceil_decimal(iv.lo, d) == ceil_decimal(iv.hi, d) == F(printed_dec)
            detail = f"in [{float(iv.lo):.8f}, {float(iv.hi):.8f}]"
        rep.add(f"M({a_str}) <= {printed_dec}", ok, detail)
    _theta_checks(rep, THETA0)

    sw = None
    if use_sweep:
        h = build_hull(n_max)
        sw = sweep(h, moment_objective, moment_constraints, (pieces[0].lo, a_star), parameter="A", samples=samples)
        rep.add("sweep piece count", len(sw.pieces) == len(pieces) - 1, f"{len(sw.pieces)}")
        for i, (sp, p) in enumerate(zip(sw.pieces, pieces)):
            rep.add(f"sweep piece {i + 1} agrees with edge formula",
                    sp.value.same_as(p.value) and sp.lo == p.lo and sp.hi == p.hi)
    rep.data["rows"] = table_rows(pieces, "A")
    return MomentTable(pieces, sw, rep)


# -- the range 12 < A <= 12 + 86/65 ----------------------------------------------

def phi_delta(m: int) -> tuple[Fraction, Fraction]:
    phi = 2 + F(2, m - 2) - F(2, m - 1) + F(4, m * m + 3 * m - 2)
    delta = F(12, m - 2) - F(8, m - 1) - F(4 * (m - 5), m * m + 3 * m - 2)
    return phi, delta


MOMENT_12_C = QuadraticSurd(0, F(3, 7568), 510)


def moment_near_12(a: object, bits: int | None = None) -> CertInterval:
    """Enclosure of ``2 + delta/8 + C delta^{3/2}`` with ``delta = A - 12 <= 86/65``."""
    delta = as_fraction(a) - 12
    if not 0 < delta <= F(86, 65):
        raise ValueError("the bound covers 12 < A <= 12 + 86/65")
    d = CertInterval.point(delta)
    return 2 + d / 8 + MOMENT_12_C.enclose(bits) * d.rpow(F(3, 2), bits)


def check_moment_12_delta(m_max: int = 10 ** 4) -> Report:
    """Exact checks of the constant in ``M(12 + delta) <= 2 + delta/8 + C delta^{3/2}``."""
    if m_max < 6:
        raise ValueError("m_max must be >= 6")
    exp = expected()["moment_12_delta"]
    c_bound2 = F(exp["bound_coefficient"]) ** 2 * F(exp["bound_radicand"])  # square of (3/344) sqrt(65/86)
    ratio = F(exp["ratio_bound"])
    rep = Report("M(12 + delta) constant")

    # phi_m and 12 + delta_m are the exponents of the B-image of the (m) family
    ok_pairs = True
    for m in range(3, 60):
        k, l = B_MAP(vinogradov_pair(m).point)
        phi, delta = phi_delta(m)
        ok_pairs &= phi == 1 + l / k and 12 + delta == 2 * (1 + 2 * k + 2 * l) / k
    rep.add("phi_m, delta_m match the R-bound exponents for 3 <= m < 60", ok_pairs)

    identity_ok = bound_ok = ratio_ok = True
    first_bad = None
    equality_at = []
    for m in range(6, m_max + 1):
        phi, delta = phi_delta(m)
        q = phi - 2 - delta / 8
        lhs2 = q * q / delta ** 3  # (delta^{-3/2} q)^2, q > 0
        rhs2 = F(m * m * (m ** 4 - 9 * m * m + 12 * m - 4), 1024 * (3 * m * m - 4 * m + 2) ** 3)
        if not (q > 0 and delta > 0 and lhs2 == rhs2):
            identity_ok = False
            first_bad = first_bad or m
        if lhs2 > c_bound2:
            bound_ok = False
            first_bad = first_bad or m
        if lhs2 == c_bound2:
            equality_at.append(m)
        if m < m_max:
            _, d_next = phi_delta(m + 1)
            if not (d_next < delta and delta / d_next <= ratio):
                ratio_ok = False
                first_bad = first_bad or m
    rng = f"6 <= m <= {m_max}"
    rep.add(f"closed-form identity, {rng}", identity_ok, "" if identity_ok else f"first failure m = {first_bad}")
    rep.add(f"bound by (3/344) sqrt(65/86), {rng}", bound_ok)
    rep.add("equality exactly at m = 6", equality_at == [6], str(equality_at))
    rep.add(f"delta_m decreasing with delta_m/delta_(m+1) <= 2193/1573, {rng}", ratio_ok)
    d6, d7 = phi_delta(6)[1], phi_delta(7)[1]
    rep.add("delta_6 = 86/65", d6 == F(exp["delta_max"]), format_fraction(d6))
    rep.add("delta_6/delta_7 = 2193/1573", d6 / d7 == ratio, format_fraction(d6 / d7))

    c_final = QuadraticSurd(0, F(exp["constant_coefficient"]), int(exp["constant_radicand"]))
    rep.add("printed constant matches the one used", c_final == MOMENT_12_C)
    c_bound = QuadraticSurd.sqrt(c_bound2)
    c_chain = QuadraticSurd.sqrt(c_bound2 * ratio)
    rep.add("C = (3/344) sqrt(65/86) * sqrt(2193/1573) = 3 sqrt(510)/7568", c_chain == c_final)
    rep.data["literal_constant_equality"] = c_bound == c_final
    rep.data["constant_ratio_squared"] = format_fraction(c_final.q ** 2 * c_final.r / c_bound2)
    return rep


# -- hybrid fourth/fourth moment -------------------------------------------------

def hybrid_objective(j: int) -> FractionalObjective:
    """``(l - k + 6jk)/(1 + 4jk)``."""
    return FractionalObjective((6 * j - 1, 1, 0), (4 * j, 0, 1))


def hybrid_constraints(j: int) -> list[AffineConstraint]:
    """``l + (2j - 1)k < 1``."""
    return [AffineConstraint(2 * j - 1, 1, 1, "<")]


def check_hybrid_moment(n_max: int = 1000) -> Report:
    exp = expected()["hybrid_moment"]
    h = build_hull(n_max)
    rep = Report("hybrid moment I_8(sigma)")
    opt = minimize(h, hybrid_objective(2), hybrid_constraints(2))
    want = F(exp["sigma"])
    arg = (F(exp["argmin"][0]), F(exp["argmin"][1]))
    rep.add("infimum 309/320", opt.value == want, format_fraction(opt.value))
    rep.add("argmin (1/56, 127/140)", opt.argmin == arg, str(tuple(map(format_fraction, opt.argmin))))
    rep.add("argmin is the vertex (k_9, l_9)", h.label(opt.argmin) == 9, str(h.label(opt.argmin)))
    rep.add("strict constraint inactive at the argmin, minimum attained", opt.attained)
    slack = arg[1] + 3 * arg[0]
    rep.add("l + 3k = 269/280 < 1 at the argmin", slack == F(269, 280) and slack < 1)
    rep.add("decimal 0.965625", want == F(exp["decimal"]))
    k0 = vertex(0)
    rep.add("(13/84, 55/84) is worse", hybrid_objective(2)(k0) > want, format_fraction(hybrid_objective(2)(k0)))
    j1 = minimize(h, hybrid_objective(1), hybrid_constraints(1))
    rep.data["j1_infimum"] = format_fraction(j1.value)
    rep.data["j1_argmin"] = [format_fraction(x) for x in j1.argmin]
    rep.data["j1_below_5_6"] = j1.value <= F(5, 6)
    return rep
