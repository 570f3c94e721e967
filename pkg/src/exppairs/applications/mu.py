"""Bounds on mu(sigma), the order of zeta in the critical strip.

A pair with ``l - k >= sigma`` gives ``mu(sigma) <= (k + l - sigma)/2``; on
the hull the optimum is ``mu(l_n - k_n) <= k_n`` at each vertex and the
chords between them.  Near ``sigma = 1`` the chords are compared against
``B (1 - sigma)^{3/2}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..hull import build_hull, vertex
from ..numeric import QuadraticSurd, as_fraction, format_fraction
from ..optimizer import AffineConstraint, FractionalObjective, PiecewiseBound, sweep
from ..polynomial import Poly, RationalFunction
from ..report import Report
from ._common import TablePiece, evaluate, expected, linear_coefficients, linear_piece, table_rows

F = Fraction
HALF = F(1, 2)


def mu_objective(sigma: Fraction) -> FractionalObjective:
    return FractionalObjective((HALF, HALF, -sigma / 2), (0, 0, 1))


def mu_constraints(sigma: Fraction) -> list[AffineConstraint]:
    """``l - k >= sigma``."""
    return [AffineConstraint(-1, 1, sigma, ">=")]


@dataclass
class MuBound:
    """Piecewise-linear upper bound ``c(sigma)`` for ``mu(sigma)``."""

    pieces: list[TablePiece]
    sweep: PiecewiseBound | None = None
    report: Report = field(default_factory=lambda: Report("mu(sigma)"))

    def __call__(self, sigma: object) -> Fraction:
        return evaluate(self.pieces, sigma)

    def piece_index(self, sigma: object) -> int:
        s = as_fraction(sigma)
        for i, p in enumerate(self.pieces):
            if p.covers(s, last=i == len(self.pieces) - 1):
                return i
        raise ValueError(f"sigma = {s} outside the table")

    def coefficients(self, i: int) -> tuple[Fraction, Fraction]:
        """``(slope, intercept)`` of piece ``i``."""
        return linear_coefficients(self.pieces[i].value)

    @property
    def breakpoints(self) -> list[Fraction]:
        return [p.lo for p in self.pieces] + [self.pieces[-1].hi]

    def rows(self) -> list[dict]:
        return table_rows(self.pieces, "sigma")


def vertex_sigma(n: int) -> tuple[Fraction, Fraction]:
    """``(l_n - k_n, k_n)``: the point where vertex ``n`` bounds ``mu``."""
    k, l = vertex(n)
    return l - k, k


def chord(p: tuple[Fraction, Fraction], q: tuple[Fraction, Fraction]) -> RationalFunction:
    (s1, m1), (s2, m2) = p, q
    slope = (m2 - m1) / (s2 - s1)
    return RationalFunction(Poly([m1 - slope * s1, slope]), Poly([1]))


def reproduce_mu_table(n_max: int = 1000, lo: object = HALF, hi: object = F(9, 10),
                       use_sweep: bool = True, samples: int = 32) -> MuBound:
    exp = expected()["mu"]
    rep = Report("mu(sigma) for 1/2 <= sigma <= 9/10")
    lo, hi = as_fraction(lo), as_fraction(hi)

    pts = [vertex_sigma(n) for n in range(0, 11)]
    for (s, m), (ws, wm) in zip(pts, exp["vertex_values"]):
        rep.add(f"mu({format_fraction(s)}) <= {format_fraction(m)}", (s, m) == (F(ws), F(wm)))
    chords = [TablePiece(p[0], q[0], chord(p, q), None) for p, q in zip(pts, pts[1:])]
    pieces = [c for c in chords if c.lo < hi]
    pieces[-1] = TablePiece(pieces[-1].lo, hi, pieces[-1].value)

    sw = None
    if use_sweep:
        h = build_hull(n_max)
        sw = sweep(h, mu_objective, mu_constraints, (lo, hi), parameter="sigma", samples=samples)
        rep.add("sweep piece count equals chord count", len(sw.pieces) == len(pieces), str(len(sw.pieces)))
        for i, (sp, c) in enumerate(zip(sw.pieces, pieces)):
            rep.add(f"sweep piece {i + 1} is the chord", sp.value.same_as(c.value) and sp.lo == c.lo and sp.hi == c.hi)
        pieces = [TablePiece(sp.lo, sp.hi, sp.value, None) for sp in sw.pieces]

    printed = exp["pieces"]
    rep.add("piece count", len(pieces) == len(printed), f"{len(pieces)} vs {len(printed)}")
    for i, (p, row) in enumerate(zip(pieces, printed)):
        want = linear_piece(row)
        rep.add(f"piece {i + 1} coefficients", p.value.same_as(want), "{} vs {}".format(
            p.value.render("sigma")[0], want.render("sigma")[0]))
        rep.add(f"piece {i + 1} range", p.lo == F(row["lo"]) and p.hi == F(row["hi"]),
                f"[{format_fraction(p.lo)}, {format_fraction(p.hi)})")
    for a, b in zip(pieces, pieces[1:]):
        rep.add(f"continuity at {format_fraction(b.lo)}", a.value(b.lo) == b.value(b.lo))
    # the last chord stays valid up to the next vertex
    rep.add("last piece holds up to sigma = 277/300", chords[9].value.same_as(pieces[-1].value)
            and chords[9].hi == F(277, 300))
    mb = MuBound(pieces, sw, rep)
    rep.data["rows"] = mb.rows()
    return mb


# -- sigma near 1 --------------------------------------------------------------------

def sigma_n(n: int) -> Fraction:
    return 1 - F(3 * n * n - 3 * n + 2, n * (n - 1) ** 2 * (n + 2))


def mu_n(n: int) -> Fraction:
    return F(2, (n - 1) ** 2 * (n + 2))


def lambda_n(n: int) -> Fraction:
    m0, m1, s0, s1 = mu_n(n), mu_n(n + 1), sigma_n(n), sigma_n(n + 1)
    return (2 * m0 * s1 - 2 * m0 - 3 * m1 * s0 + m1 * s1 + 2 * m1) / ((m0 - m1) * (s0 - s1))


def f_squared(n: int, lam: Fraction) -> Fraction:
    """``f(n, lambda)^2`` with ``f = (lam mu_n + (1-lam) mu_{n+1}) / (1 - lam sigma_n - (1-lam) sigma_{n+1})^{3/2}``."""
    num = lam * mu_n(n) + (1 - lam) * mu_n(n + 1)
    base = 1 - lam * sigma_n(n) - (1 - lam) * sigma_n(n + 1)
    return num * num / base ** 3


def f_closed_squared(n: int) -> Fraction:
    """Square of ``(2/3^{3/2}) n^{1/2} (n+1)^{3/2} / (n^2 + 1)``."""
    return F(4 * n * (n + 1) ** 3, 27 * (n * n + 1) ** 2)


def _refined_holds(n: int, c: Fraction) -> bool:
    """``sqrt(X) < 1 + (3c/2) sqrt(3s)`` with ``X = n(n+1)^3/(n^2+1)^2``, ``s = 1 - sigma_{n+1}``.

    This is the refined inequality multiplied through by ``3^{3/2}/2``; both
    sides are positive, so squaring twice decides it exactly.
    """
    x = F(n * (n + 1) ** 3, (n * n + 1) ** 2)
    s = F(3 * n * n + 3 * n + 2, n * n * (n + 1) * (n + 3))
    # X < 1 + 3c sqrt(3s) + (27/4) c^2 s
    lhs = x - 1 - F(27, 4) * c * c * s
    if lhs < 0:
        return True
    return lhs * lhs < 9 * c * c * 3 * s


def _chord_below_curve(slope: Fraction, icpt: Fraction, lo: Fraction, hi: Fraction, b2: Fraction) -> bool:
    """``slope*s + icpt <= B (1 - s)^{3/2}`` on ``[lo, hi]`` given ``B^2 = b2``.

    The difference is convex in ``s``; its minimum is at an endpoint or where
    ``-(3/2) B (1 - s)^{1/2} = slope``, which is rational.
    """
    def ok_at(s: Fraction) -> bool:
        v = slope * s + icpt
        return v <= 0 or v * v <= b2 * (1 - s) ** 3

    cands = [lo, hi]
    if slope < 0:
        s_star = 1 - 4 * slope * slope / (9 * b2)
        if lo < s_star < hi:
            cands.append(s_star)
    return all(ok_at(s) for s in cands)


def check_mu_three_halves(n_max: int = 1000, mu_table: MuBound | None = None) -> Report:
    """``mu(sigma) <= B (1 - sigma)^{3/2}`` and its refinement near 1."""
    if n_max < 5:
        raise ValueError("n_max must be >= 5")
    exp = expected()["mu_three_halves"]
    rep = Report("mu(sigma) <= B (1 - sigma)^{3/2}")
    b = QuadraticSurd(0, F(exp["B_coefficient"]), int(exp["B_radicand"]))
    b2 = b.q ** 2 * b.r

    rep.add("sigma_5 = 249/280, mu_5 = 1/56", sigma_n(5) == F(exp["sigma_5"]) and mu_n(5) == F(1, 56))
    verts_ok = all(vertex_sigma(n + 4) == (sigma_n(n), mu_n(n)) for n in range(5, 200))
    rep.add("(sigma_n, mu_n) from the hull vertices (k_{n+4}, l_{n+4}), 5 <= n < 200", verts_ok)

    ident_ok = lam_ok = dec_ok = True
    bad = []
    for n in range(5, n_max + 1):
        lam = lambda_n(n)
        m0, m1, s0, s1 = mu_n(n), mu_n(n + 1), sigma_n(n), sigma_n(n + 1)
        # stationary point of f^2 = (a + b l)^2/(c + d l)^3
        a_, b_, c_, d_ = m1, m0 - m1, 1 - s1, s1 - s0
        crit = (3 * a_ * d_ - 2 * b_ * c_) / (-b_ * d_)
        if not (0 <= lam <= 1 and lam == crit and f_squared(n, lam) >= max(f_squared(n, F(0)), f_squared(n, F(1)))):
            lam_ok = False
            bad.append(n)
        dm = m1 - m0
        x = dm + m0 * s1 - m1 * s0
        middle2 = 4 * dm ** 3 / (27 * (s0 - s1) ** 2 * x)
        if not (f_squared(n, lam) == middle2 == f_closed_squared(n)):
            ident_ok = False
            bad.append(n)
        if n < n_max and not f_closed_squared(n + 1) < f_closed_squared(n):
            dec_ok = False
            bad.append(n)
    rng = f"5 <= n <= {n_max}"
    rep.add(f"lambda_n in [0, 1] is the maximiser of f(n, .), {rng}", lam_ok)
    rep.add(f"f(n, lambda_n) equals both closed forms, {rng}", ident_ok)
    rep.add(f"f(n, lambda_n) strictly decreasing, {rng}", dec_ok, "" if not bad else f"first failure n = {bad[0]}")
    f5 = QuadraticSurd.sqrt(f_closed_squared(5))
    rep.add("f(5, lambda_5) = 2 sqrt(10)/13", f5 == b, f"f^2 = {format_fraction(f_closed_squared(5))}")

    if mu_table is None:
        mu_table = reproduce_mu_table(use_sweep=False)
    below = True
    for i, p in enumerate(mu_table.pieces):
        if p.lo >= sigma_n(5):
            break
        sl, ic = mu_table.coefficients(i)
        below &= _chord_below_curve(sl, ic, p.lo, min(p.hi, sigma_n(5)), b2)
    rep.add("piecewise bound <= B (1 - sigma)^{3/2} for 1/2 <= sigma <= 249/280", below)

    c = F(exp["refined_constant"])
    n0 = exp["refined_from_n"]
    ref_ok = all(_refined_holds(n, c) for n in range(n0, n_max + 1))
    rep.add(f"refined inequality with 1/3 + 1/100, {n0} <= n <= {n_max}", ref_ok)
    rep.add("1/3 + 1/100 = 103/300", F(1, 3) + F(1, 100) == c)
    s_ok = all(F(3 * n * n + 3 * n + 2, n * n * (n + 1) * (n + 3)) == 1 - sigma_n(n + 1) for n in range(n0, n_max + 1))
    rep.add("(3n^2 + 3n + 2)/(n^2 (n+1)(n+3)) = 1 - sigma_{n+1}", s_ok)
    rep.add("sigma_33 = 1 - 317/118272 = 117955/118272",
            sigma_n(n0) == 1 - F(317, 118272) == F(exp["refined_sigma"]))
    first = next((n for n in range(5, n0 + 1) if all(_refined_holds(m, c) for m in range(n, n0 + 1))), None)
    rep.data["refined_holds_from"] = first
    return rep
