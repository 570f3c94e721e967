"""The polygon H of exponent pairs and its finite truncations H_N.

``vertex(n)`` gives the vertex ``(k_n, l_n)`` for every integer ``n``; ``H_N``
is the convex hull of ``vertex(n)`` for ``|n| <= N`` together with the anchors
``(0, 1)`` and ``(1/2, 1/2)``.  The ``verify_*`` functions run exact checks
and return :class:`~exppairs.report.Report` objects.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .geometry import Point, Polygon, convex_hull, segment_image_is_segment
from .numeric import CertInterval
from .pairs import (A_MAP, B_MAP, C_MAP, DERIVATIVE_TESTS, SPORADIC, BI_THETAS, AnyPair, BoxedPair,
                    ExponentPair, bi_pair, derivative_test_pair, enumerate_known_pairs, huxley_pair,
                    vinogradov_log_pair, vinogradov_pair)
from .report import Report

F = Fraction
ANCHOR_TOP: Point = (F(0), F(1))
ANCHOR_RIGHT: Point = (F(1, 2), F(1, 2))

_BASE: dict[int, Point] = {
    0: (F(13, 84), F(55, 84)),
    1: (F(4742, 38463), F(35731, 51284)),
    2: (F(18, 199), F(593, 796)),
    3: (F(2779, 38033), F(58699, 76066)),
    4: (F(715, 10238), F(7955, 10238)),
}


@lru_cache(maxsize=None)
def vertex(n: int) -> Point:
    """The vertex ``(k_n, l_n)``; ``k_n`` is strictly decreasing in ``n``."""
    if n < 0:
        return B_MAP(vertex(-n))
    if n <= 4:
        return _BASE[n]
    if n <= 8:
        return A_MAP(vertex(n - 4))
    m = n - 4
    return (F(2, (m - 1) ** 2 * (m + 2)), 1 - F(3 * m - 2, m * (m - 1) * (m + 2)))


def slope(n: int) -> Fraction:
    """Slope ``Q_n`` of the edge from vertex ``n`` to vertex ``n + 1``."""
    (k1, l1), (k2, l2) = vertex(n), vertex(n + 1)
    return (l2 - l1) / (k2 - k1)


def slope_closed_form(n: int) -> Fraction:
    """``Q_n = -(n-5)(n-4)/(n-3)``, valid for ``n >= 9``."""
    return F(-(n - 5) * (n - 4), n - 3)


@dataclass(frozen=True)
class HullH:
    """The truncated hull ``H_N`` with its vertex labels."""

    n_max: int
    polygon: Polygon
    labels: dict = field(compare=False, repr=False)

    def contains(self, p: Sequence[object], strict: bool = False) -> bool:
        return self.polygon.contains(p, strict=strict)

    def contains_pair(self, p: AnyPair, strict: bool = False) -> bool:
        """Membership of an exact pair, or of every certificate point of a boxed pair."""
        if isinstance(p, BoxedPair):
            return all(self.polygon.contains(c, strict=strict) for c in p.certificate_points())
        return self.polygon.contains(p.point, strict=strict)

    @property
    def vertices(self) -> tuple[Point, ...]:
        return self.polygon.vertices

    def label(self, p: Point) -> int | str | None:
        """Vertex index ``n`` for ``(k_n, l_n)``, ``"top"``/``"right"`` for the anchors."""
        return self.labels.get(p)

    def warn_if_truncated(self, p: Point, margin: int = 2) -> None:
        lab = self.labels.get(p)
        if isinstance(lab, int) and abs(lab) >= self.n_max - margin:
            warnings.warn(f"optimum at vertex {lab} is near the truncation N={self.n_max}; "
                          "increase N", RuntimeWarning, stacklevel=3)


@lru_cache(maxsize=8)
def build_hull(n_max: int = 1000) -> HullH:
    """Construct ``H_N``.  All ``2N + 3`` generating points come out as vertices."""
    if n_max < 1:
        raise ValueError("N must be >= 1")
    pts = [vertex(n) for n in range(-n_max, n_max + 1)] + [ANCHOR_TOP, ANCHOR_RIGHT]
    labels: dict = {vertex(n): n for n in range(-n_max, n_max + 1)}
    labels[ANCHOR_TOP] = "top"
    labels[ANCHOR_RIGHT] = "right"
    poly = Polygon(tuple(convex_hull(pts)))
    return HullH(n_max, poly, labels)


def hull_to_json(h: HullH) -> dict:
    from .numeric import format_fraction
    return {"n": h.n_max, "vertices": [[format_fraction(k), format_fraction(l)] for k, l in h.vertices]}


def hull_from_json(obj: dict) -> HullH:
    from .numeric import as_fraction
    verts = tuple((as_fraction(k), as_fraction(l)) for k, l in obj["vertices"])
    n = int(obj["n"])
    labels: dict = {}
    for i in range(-n, n + 1):
        labels[vertex(i)] = i
    labels[ANCHOR_TOP] = "top"
    labels[ANCHOR_RIGHT] = "right"
    return HullH(n, Polygon(verts), {v: labels.get(v) for v in verts})


# -- checks ------------------------------------------------------------------

def check_hull_structure(h: HullH) -> Report:
    rep = Report(f"hull structure N={h.n_max}")
    expected = 2 * h.n_max + 3
    rep.add("vertex count", len(h.vertices) == expected, f"{len(h.vertices)} of {expected}")
    rep.add("anchors are vertices", ANCHOR_TOP in h.vertices and ANCHOR_RIGHT in h.vertices)
    ks = [vertex(n)[0] for n in range(-h.n_max, h.n_max + 1)]
    rep.add("k_n strictly decreasing", all(a > b for a, b in zip(ks, ks[1:])))
    return rep


def check_convexity_slopes(n_max: int = 1000) -> Report:
    """Slopes ``Q_n`` for ``0 <= n <= n_max`` are negative, strictly decreasing, ``Q_0 <= -1``,
    and equal the closed form from ``n = 9`` on."""
    rep = Report(f"convexity slopes 0..{n_max}")
    qs = [slope(n) for n in range(0, n_max + 1)]
    rep.add("Q_0 <= -1", qs[0] <= -1, f"Q_0 = {qs[0]}")
    bad_neg = [n for n, q in enumerate(qs) if q >= 0]
    rep.add("all Q_n negative", not bad_neg, f"first offender {bad_neg[:1]}")
    bad_dec = [n for n in range(len(qs) - 1) if not qs[n + 1] < qs[n]]
    rep.add("Q_n strictly decreasing", not bad_dec, f"first offender {bad_dec[:1]}")
    bad_cf = [n for n in range(9, n_max + 1) if qs[n] != slope_closed_form(n)]
    rep.add("closed form for n >= 9", not bad_cf, f"first offender {bad_cf[:1]}")
    rep.data["Q"] = qs[:12]
    return rep


def _containment_report(title: str, h: HullH, pairs: Iterable[AnyPair], strict: bool) -> Report:
    rep = Report(title)
    for p in pairs:
        inside = h.contains_pair(p, strict=strict)
        rep.add(f"{p.provenance} in H_{h.n_max}", inside)
    return rep


def verify_containment(n_max: int = 1000, family_cap: int = 100, tail_cap: int = 400,
                       strict: bool = False, bits: int | None = None) -> Report:
    """Catalog pairs (families up to ``family_cap``) lie in ``H_N``; the tails of the two
    infinite families beyond index 100 lie in the region R contained in H."""
    h = build_hull(n_max)
    rep = _containment_report(f"containment N={n_max}", h, enumerate_known_pairs(family_cap, bits), strict)
    if tail_cap > 100:
        rep.extend(region_r_report(range(101, tail_cap + 1), bits))
    return rep


# -- the region R = {k^(2/3) + l >= 1, k + l <= 1, k <= k_100} ----------------

def in_region_r(p: Point) -> bool:
    """Exact test: ``k^(2/3) + l >= 1`` is ``(1 - l)^3 <= k^2`` when ``l <= 1``."""
    k, l = p
    return 0 <= k <= vertex(100)[0] and k + l <= 1 and l <= 1 and (1 - l) ** 3 <= k * k


def region_r_boundary_checks(n_range: Iterable[int]) -> Report:
    """For boundary edges ``[k_n, k_{n+1}]`` with ``n >= 100``: ``k_n < 2^(3/2)/n^3``,
    ``1 - 2/n^2 > l_{n+1}`` and the closed form of their quotient."""
    rep = Report("region R lies in H")
    for n in n_range:
        k, _ = vertex(n)
        _, l1 = vertex(n + 1)
        ok = k * k * F(n) ** 6 < 8
        q = (1 - F(2, n * n)) / l1
        closed = 1 + F(n ** 3 + 5 * n * n - 38 * n + 24, n * n * (n ** 3 - 8 * n * n + 16 * n - 1))
        rep.add(f"edge n={n}", ok and q > 1 and q == closed)
    return rep


def region_r_report(m_range: Iterable[int], bits: int | None = None) -> Report:
    rep = Report("family tails in R")
    k100 = vertex(100)[0]
    for m in m_range:
        hp = huxley_pair(m)
        rep.add(f"huxley-family(m={m}) in R", in_region_r(hp.point))
        bp = vinogradov_log_pair(m, bits)
        a, b = bp.k, bp.l
        # a^(2/3) + b > 1 at the worst corner (a_lo, b_lo)
        lhs = CertInterval.point(a.lo).rpow(F(2, 3), bits) + b.lo
        rep.add(f"vinogradov-log(m={m}) in R",
                lhs.lo > 1 and a.hi + b.hi < 1 and a.hi < k100)
    return rep


# -- closure under A and C ----------------------------------------------------

def _closure_chunk(args: tuple[str, list[int], int, bool]) -> list[tuple[int, bool, bool]]:
    name, ms, n_max, strict = args
    pm = {"A": A_MAP, "C": C_MAP}[name]
    h = build_hull(n_max)
    out = []
    for m in ms:
        img = pm(vertex(m))
        seg = segment_image_is_segment(pm, vertex(m), vertex(m + 1), samples=8)
        out.append((m, h.contains(img, strict=strict), seg))
    return out


def verify_closure(transform: str, m_range: Iterable[int] = range(-99, 100), n_max: int = 1000,
                   workers: int = 1, strict: bool = False) -> Report:
    """Images of vertices under ``A`` or ``C`` lie in ``H_N``, and edges map onto segments."""
    if transform not in ("A", "C"):
        raise ValueError(f"closure is checked for A and C, not {transform!r}")
    ms = list(m_range)
    if workers > 1 and len(ms) > 1:
        size = -(-len(ms) // workers)
        chunks = [(transform, ms[i:i + size], n_max, strict) for i in range(0, len(ms), size)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = [r for part in ex.map(_closure_chunk, chunks) for r in part]
    else:
        results = _closure_chunk((transform, ms, n_max, strict))
    rep = Report(f"closure under {transform} in H_{n_max}")
    for m, inside, seg in results:
        rep.add(f"{transform}(k_{m}) in H_{n_max}", inside)
        rep.add(f"{transform} maps edge {m}->{m + 1} to a segment", seg)
    return rep


def bracket_index(k: Fraction) -> int:
    """The ``N`` with ``k_{N+1} < k <= k_N``, found by bisection (requires ``0 < k < 1/2``)."""
    if not 0 < k < F(1, 2):
        raise ValueError("k must lie strictly between 0 and 1/2")
    lo, hi = -1, 1
    while vertex(lo)[0] < k:
        lo *= 2
    while vertex(hi)[0] >= k:
        hi *= 2
    # invariant: k_lo >= k > k_hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if vertex(mid)[0] >= k:
            lo = mid
        else:
            hi = mid
    return lo


def bracket_index_linear(k: Fraction) -> int:
    """Reference linear scan for :func:`bracket_index`."""
    n = -1
    while vertex(n)[0] < k:
        n -= 1
    while not (vertex(n + 1)[0] < k <= vertex(n)[0]):
        n += 1
    return n


def closure_tail_check(transform: str, m: int) -> dict:
    """Edge inequality for the image of vertex ``m`` against its bracketing edge."""
    pm = {"A": A_MAP, "C": C_MAP}[transform]
    kp, lp = pm(vertex(m))
    n = bracket_index(kp)
    (kn, ln), (k1, l1) = vertex(n), vertex(n + 1)
    lhs = kp * (l1 - ln) + lp * (kn - k1)
    rhs = kn * l1 - ln * k1
    return {
        "transform": transform,
        "m": m,
        "N": n,
        "N_linear": bracket_index_linear(kp),
        "edge_inequality": lhs >= rhs,
        "sum_below_one": kp + lp < 1,
    }


def closure_tail_report(ms: Sequence[int] = (100, 101, 150, 1000, -100, -101, -150, -1000)) -> Report:
    rep = Report("closure beyond |m| >= 100 (spot checks)")
    for name in ("A", "C"):
        for m in ms:
            r = closure_tail_check(name, m)
            rep.add(f"{name} m={m} bracket N={r['N']}", r["N"] == r["N_linear"])
            rep.add(f"{name} m={m} edge inequality", r["edge_inequality"] and r["sum_below_one"])
    return rep


# -- port of the original verification program -------------------------------

def program1_suite(n_containment: int = 300, n_closure: int = 1000, strict: bool = False,
                   bits: int | None = None, workers: int = 1) -> Report:
    """Exact port of the reference verification program.

    Containment uses ``H_{n_containment}`` and checks the literal loops of
    the reference program (its Huxley-style family starts at ``m = 0``);
    closure checks ``A`` and ``C`` images of vertices ``|m| < 100`` in
    ``H_{n_closure}``.
    """
    h = build_hull(n_containment)
    pairs: list[AnyPair] = [bi_pair(t) for t in BI_THETAS]
    pairs += [ExponentPair(k, l, provenance=f"sporadic({i + 1})") for i, (k, l) in enumerate(SPORADIC)]
    pairs += [derivative_test_pair(m, t) for m, t in DERIVATIVE_TESTS]
    pairs += [huxley_pair(m) for m in range(0, 101)]
    pairs += [vinogradov_log_pair(m, bits) for m in range(3, 101)]
    pairs += [vinogradov_pair(m) for m in range(3, 101)]
    rep = _containment_report("program1", h, pairs, strict)
    for name in ("A", "C"):
        sub = verify_closure(name, range(-99, 100), n_closure, workers=workers, strict=strict)
        rep.checks.extend(c for c in sub.checks if " in H_" in c.name)
    return rep
