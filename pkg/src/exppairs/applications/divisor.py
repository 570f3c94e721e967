"""Exponents for the generalised divisor problem from lower bounds on m(sigma).

For a pair ``(k, l)`` and the bound ``mu(sigma) <= c(sigma)`` two large-value
estimates give ``m(sigma) >= min(A1, A2)`` with

    A1 = (12 + 3(2 sigma - 1)/c) / (1 + 2 sigma)
    A2 = (4c(1 + 2k + 2l) + 2 sigma(1 + 2k + 4l) - 1 - 2k - 6l) / (c(2k + (2l + 1)(2 sigma - 1)))

and ``alpha_n`` is bounded by the smallest ``sigma`` with ``m(sigma) >= n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..hull import HullH, build_hull, vertex
from ..numeric import CertInterval, QuadraticSurd, format_fraction
from ..optimizer import FractionalObjective, maximize
from ..polynomial import Poly, RationalFunction, real_roots
from ..report import Report
from ._common import TablePiece, ceil_decimal, expected, product_piece
from .mu import MuBound, reproduce_mu_table

F = Fraction
SIGMA = RationalFunction(Poly([0, 1]), Poly([1]))

# (lo, hi, index of the mu piece supplying c, vertex index); 0-based mu pieces
SCHEDULE = [
    ("0.646", "521/796", 1, -4),
    ("521/796", "53141/76066", 2, -4),
    ("53141/76066", "3620/5119", 3, -4),
    ("3620/5119", "0.722", 4, -4),
    ("0.723", "52209/69128", 4, -3),
    ("52209/69128", "0.765", 5, -3),
    ("0.766", "0.794", 5, -2),
]
# the last piece keeps its formula up to the end of its mu piece, which alpha_21 needs
LAST_PIECE_END = F(1389, 1736)


@dataclass(frozen=True)
class DivisorResult:
    n: int
    alpha_bound: CertInterval
    sigma_star: object
    pair: tuple[Fraction, Fraction]
    piece: int


def a1_function(c: RationalFunction) -> RationalFunction:
    s = SIGMA
    return (3 * (2 * s - 1) / c + 12) / (2 * s + 1)


def a2_function(c: RationalFunction, p: tuple[Fraction, Fraction]) -> RationalFunction:
    k, l = p
    s = SIGMA
    num = 4 * (1 + 2 * k + 2 * l) * c + 2 * (1 + 2 * k + 4 * l) * s - (1 + 2 * k + 6 * l)
    den = c * ((2 * l + 1) * (2 * s - 1) + 2 * k)
    return num / den


def a1(c: Fraction, sigma: Fraction) -> Fraction:
    return (12 + 3 * (2 * sigma - 1) / c) / (1 + 2 * sigma)


def a2_objective(c: Fraction, sigma: Fraction) -> FractionalObjective:
    """``A2`` as a fractional-linear function of ``(k, l)`` at fixed ``sigma``."""
    return FractionalObjective(
        (8 * c + 4 * sigma - 2, 8 * c + 8 * sigma - 6, 4 * c + 2 * sigma - 1),
        (2 * c, 2 * c * (2 * sigma - 1), c * (2 * sigma - 1)))


def _c_function(mu: MuBound, i: int) -> RationalFunction:
    slope, icpt = mu.coefficients(i)
    return RationalFunction(Poly([icpt, slope]), Poly([1]))


def m_pieces(mu: MuBound) -> list[TablePiece]:
    """``A2`` for the scheduled pair on each range (``A1`` never binds there)."""
    out = []
    for lo, hi, i, v in SCHEDULE:
        out.append(TablePiece(F(lo), F(hi), a2_function(_c_function(mu, i), vertex(v)), vertex(v)))
    return out


def _positive_on(rf: RationalFunction, lo: Fraction, hi: Fraction) -> bool:
    """Exact: ``rf > 0`` on ``[lo, hi]`` (no sign change of numerator or denominator)."""
    for p in (rf.num, rf.den):
        if real_roots(p, lo, hi):
            return False
    return rf(lo) > 0


def invert_piece(piece: TablePiece, n: int, hi: Fraction | None = None) -> object | None:
    """The root of ``m(sigma) = n`` on the piece, or None."""
    hi = piece.hi if hi is None else hi
    crit = piece.value.num - n * piece.value.den
    roots = real_roots(crit, piece.lo, hi)
    return roots[0] if roots else None


def _box(r: object, width: Fraction) -> CertInterval:
    if isinstance(r, QuadraticSurd):
        bits = 8
        while True:
            b = r.enclose(bits)
            if b.width <= width:
                return b
            bits *= 2
    if isinstance(r, CertInterval):
        return r
    return CertInterval.point(r)


def alpha_closed_form(n: int) -> QuadraticSurd:
    cf = expected()["divisor"]["alpha_9_closed_form"]
    d2, d1, d0 = (int(x) for x in cf["D"])
    a, b, den = int(cf["a"]), int(cf["b"]), int(cf["den"])
    return QuadraticSurd(F(a * n + b, den * n), F(1, den * n), d2 * n * n + d1 * n + d0)


def schedule_check(mu: MuBound, h: HullH, samples: int = 6) -> tuple[bool, list[dict]]:
    """At sample points of each range, the scheduled vertex maximises ``min(A1, A2)`` over ``h``."""
    rows = []
    ok = True
    for lo, hi, i, v in SCHEDULE:
        lo_f, hi_f = F(lo), F(hi)
        slope, icpt = mu.coefficients(i)
        for j in range(samples):
            s = lo_f + (hi_f - lo_f) * j / (samples - 1)
            c = slope * s + icpt
            best = maximize(h, a2_objective(c, s))
            sched = a2_objective(c, s)(vertex(v))
            bound = a1(c, s)
            got, top = min(bound, sched), min(bound, best.value)
            good = got == top
            ok = ok and good
            rows.append({"sigma": format_fraction(s), "scheduled": float(got), "best": float(top),
                         "best_vertex": h.label(best.argmin)})
    return ok, rows


def reproduce_divisor_bounds(n_max: int = 1000, mu: MuBound | None = None,
                             report: Report | None = None) -> list[DivisorResult]:
    exp = expected()["divisor"]
    rep = report if report is not None else Report("divisor problem exponents")
    mu = mu or reproduce_mu_table(n_max, use_sweep=False)
    pieces = m_pieces(mu)

    # pair schedule
    for row in exp["schedule"]:
        mine = [(lo, hi) for lo, hi, _, v in SCHEDULE if v == row["vertex"]]
        rep.add(f"vertex {row['vertex']} scheduled on [{row['lo']}, {row['hi']}]",
                F(mine[0][0]) == F(row["lo"]) and F(mine[-1][1]) == F(row["hi"]))
    h = build_hull(n_max)
    ok, rows = schedule_check(mu, h)
    rep.add(f"scheduled vertex maximises min(A1, A2) over H_{n_max}", ok,
            f"{sum(r['scheduled'] == r['best'] for r in rows)}/{len(rows)} samples")
    rep.data["schedule_samples"] = rows

    # the seven pieces
    for j, (p, row) in enumerate(zip(pieces, exp["pieces"])):
        rep.add(f"m(sigma) piece {j + 1}", p.value.same_as(product_piece(row))
                and p.lo == F(row["lo"]) and p.hi == F(row["hi"]))
        c = _c_function(mu, SCHEDULE[j][2])
        end = LAST_PIECE_END if j == len(pieces) - 1 else p.hi
        rep.add(f"A1 >= A2 on piece {j + 1}", _positive_on(a1_function(c) - p.value, p.lo, end))
        inside = mu.pieces[SCHEDULE[j][2]]
        rep.add(f"piece {j + 1} lies in its mu piece", inside.lo <= p.lo and end <= inside.hi)
    gap = (F("0.722"), F("0.723"))
    mid = (gap[0] + gap[1]) / 2
    rep.data["uncovered_range"] = {
        "range": [format_fraction(gap[0]), format_fraction(gap[1])],
        "m_at_midpoint": {"vertex -4": format_fraction(pieces[3].value(mid)),
                          "vertex -3": format_fraction(pieces[4].value(mid))},
    }

    # inversion
    tol = F(exp["tolerance"])
    results = []
    for n_str, printed in exp["alpha"].items():
        n = int(n_str)
        root, idx = None, None
        for j, p in enumerate(pieces):
            end = LAST_PIECE_END if j == len(pieces) - 1 else p.hi
            r = invert_piece(p, n, end)
            if r is not None:
                root, idx = r, j
                break
        if root is None:
            rep.add(f"alpha_{n}: m(sigma) = {n} has a root", False)
            continue
        box = _box(root, tol)
        m_hi = pieces[idx].value(box.hi)
        rep.add(f"alpha_{n} <= {printed}", box.hi <= F(printed) + tol and m_hi >= n,
                f"[{float(box.lo):.7f}, {float(box.hi):.7f}] on piece {idx + 1}")
        results.append(DivisorResult(n, box, root, pieces[idx].pair, idx + 1))

    # closed form for the first piece
    cf = exp["alpha_9_closed_form"]
    first = pieces[0].value
    r9 = next(r for r in results if r.n == 9)
    rep.add("alpha_9 equals the closed form with D", isinstance(r9.sigma_star, QuadraticSurd)
            and r9.sigma_star == alpha_closed_form(9))
    n_lo, n_hi = first(pieces[0].lo), first(pieces[0].hi)
    rep.add("first piece covers 8.957 <= n <= 413385287/44567046",
            ceil_decimal(n_lo, 3) == F(cf["n_range"][0]) and n_hi == F(cf["n_range"][1]),
            f"{float(n_lo):.6f} .. {format_fraction(n_hi)}")
    rep.add("alpha_9 <= 0.6472", r9.alpha_bound.hi <= F(cf["decimal"]))
    rep.data["alpha"] = {str(r.n): [format_fraction(r.alpha_bound.lo), format_fraction(r.alpha_bound.hi)]
                         for r in results}
    return results


def divisor_report(n_max: int = 1000, mu: MuBound | None = None) -> tuple[Report, list[DivisorResult]]:
    rep = Report("divisor problem exponents")
    res = reproduce_divisor_bounds(n_max, mu, rep)
    return rep, res
