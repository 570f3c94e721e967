"""Exact optimisation of fractional-linear objectives over convex polygons.

A fractional-linear function ``(a k + b l + c)/(d k + e l + f)`` whose
denominator keeps one sign is quasilinear, so over a convex polygon cut by
half-planes its minimum sits at a vertex of the cut region.  :func:`minimize`
clips exactly and evaluates every vertex.  :func:`sweep` follows the optimum
as the coefficients vary with a scalar parameter and returns the optimal
value as a piecewise rational function with exact breakpoints.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .geometry import Point, Polygon, clip_halfplane, cross
from .numeric import CertInterval, QuadraticSurd, as_fraction, compare, format_fraction
from .polynomial import Poly, RationalFunction, real_roots

F = Fraction
DEFAULT_EPS = F(1, 10 ** 12)


class InfeasibleError(ValueError):
    """The constraints leave no feasible point in the polygon."""


class DenominatorSignError(ValueError):
    """The objective's denominator vanishes or changes sign on the feasible region."""


class SweepError(RuntimeError):
    """A parametric sweep could not resolve its piece structure."""


# -- problem data ---------------------------------------------------------------

@dataclass(frozen=True)
class FractionalObjective:
    """``(a k + b l + c) / (d k + e l + f)``."""

    num: tuple[Fraction, Fraction, Fraction]
    den: tuple[Fraction, Fraction, Fraction] = (F(0), F(0), F(1))

    def __post_init__(self) -> None:
        num = tuple(as_fraction(x) for x in self.num)
        den = tuple(as_fraction(x) for x in self.den)
        if len(num) != 3 or len(den) != 3:
            raise ValueError("numerator and denominator need three coefficients each")
        if not any(den):
            raise ValueError("denominator is identically zero")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def numerator(self, p: Point) -> Fraction:
        a, b, c = self.num
        return a * p[0] + b * p[1] + c

    def denominator(self, p: Point) -> Fraction:
        d, e, f = self.den
        return d * p[0] + e * p[1] + f

    def __call__(self, p: Sequence[object]) -> Fraction:
        q = (as_fraction(p[0]), as_fraction(p[1]))
        return self.numerator(q) / self.denominator(q)

    def negated(self) -> "FractionalObjective":
        return FractionalObjective(tuple(-x for x in self.num), self.den)


_RELATIONS = {">=": ">=", ">": ">", "<=": "<=", "<": "<", "==": "==", "=": "=="}


@dataclass(frozen=True)
class AffineConstraint:
    """``g k + h l  rel  t`` with ``rel`` one of ``>=, >, <=, <, ==``."""

    g: Fraction
    h: Fraction
    t: Fraction
    rel: str = ">="

    def __post_init__(self) -> None:
        for name in ("g", "h", "t"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.rel not in _RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "rel", _RELATIONS[self.rel])
        if self.g == 0 and self.h == 0:
            raise ValueError("constraint with (g, h) = (0, 0)")

    @property
    def strict(self) -> bool:
        return self.rel in (">", "<")

    def slack(self, p: Point) -> Fraction:
        return self.g * p[0] + self.h * p[1] - self.t

    def satisfied(self, p: Point, closed: bool = False) -> bool:
        s = self.slack(p)
        rel = self.rel
        if closed:
            rel = {">": ">=", "<": "<="}.get(rel, rel)
        return {">=": s >= 0, ">": s > 0, "<=": s <= 0, "<": s < 0, "==": s == 0}[rel]

    def halfplanes(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """Closed half-planes ``g k + h l >= t`` whose intersection is the closure."""
        g, h, t = self.g, self.h, self.t
        if self.rel in (">=", ">"):
            return [(g, h, t)]
        if self.rel in ("<=", "<"):
            return [(-g, -h, -t)]
        return [(g, h, t), (-g, -h, -t)]


@dataclass(frozen=True)
class Optimum:
    """Result of :func:`minimize`.

    ``value`` is the minimum (or the infimum when ``attained`` is false
    because the minimiser sits on a strict constraint); ``witness`` is then a
    strictly feasible point whose value is within ``eps`` of it.
    """

    value: Fraction
    argmin: Point
    attained: bool = True
    active_edge: tuple[int, int] | None = None
    certificate: tuple[tuple[Point, Fraction], ...] = ()
    witness: Point | None = None
    region: tuple[Point, ...] = field(default=(), repr=False)


def _vertices_of(poly: object) -> tuple[tuple[Point, ...], Polygon | None]:
    polygon = getattr(poly, "polygon", poly)
    if isinstance(polygon, Polygon):
        return polygon.vertices, polygon
    verts = tuple((as_fraction(p[0]), as_fraction(p[1])) for p in polygon)  # type: ignore[union-attr]
    return verts, None


def feasible_region(vertices: Sequence[Point], constraints: Iterable[AffineConstraint]) -> list[Point]:
    """Vertices of the polygon clipped by the closures of all constraints."""
    region = list(vertices)
    for c in constraints:
        for g, h, t in c.halfplanes():
            region = clip_halfplane(region, g, h, t)
            if not region:
                return []
    return region


def minimize(poly: object, obj: FractionalObjective, constraints: Iterable[AffineConstraint] = (),
             eps: object = DEFAULT_EPS) -> Optimum:
    """Exact minimum of ``obj`` over ``poly`` subject to ``constraints``.

    ``poly`` may be a :class:`~exppairs.geometry.Polygon`, anything with a
    ``polygon`` attribute (such as the truncated hull), or a vertex list in
    counter-clockwise order.
    """
    cons = list(constraints)
    verts, polygon = _vertices_of(poly)
    region = feasible_region(verts, cons)
    if not region:
        raise InfeasibleError("constraints cut the polygon down to nothing")
    dens = [obj.denominator(p) for p in region]
    if any(d == 0 for d in dens) or not (all(d > 0 for d in dens) or all(d < 0 for d in dens)):
        raise DenominatorSignError("denominator is not sign-definite on the feasible region; split it")
    cert = tuple((p, obj.numerator(p) / d) for p, d in zip(region, dens))
    best_i = min(range(len(cert)), key=lambda i: cert[i][1])
    best, value = cert[best_i]

    attained = True
    witness = None
    strict = [c for c in cons if c.strict]
    if strict:
        if all(any(c.slack(p) == 0 for c in strict) for p in region) and not _has_strict_point(region, strict):
            raise InfeasibleError("no point satisfies the strict constraints")
        if any(c.slack(best) == 0 for c in strict):
            attained = False
            witness = _strict_witness(region, best_i, obj, value, strict, as_fraction(eps))

    active = None
    if polygon is not None:
        idx = polygon.vertex_index(best)
        active = (idx, idx) if idx is not None else polygon.edge_containing(best)
        warn = getattr(poly, "warn_if_truncated", None)
        if warn is not None:
            warn(best)
    return Optimum(value, best, attained, active, cert, witness, tuple(region))


def maximize(poly: object, obj: FractionalObjective, constraints: Iterable[AffineConstraint] = (),
             eps: object = DEFAULT_EPS) -> Optimum:
    """Maximum of ``obj``; returned with the sign of the value restored."""
    res = minimize(poly, obj.negated(), constraints, eps)
    return Optimum(-res.value, res.argmin, res.attained, res.active_edge,
                   tuple((p, -v) for p, v in res.certificate), res.witness, res.region)


def _has_strict_point(region: Sequence[Point], strict: Sequence[AffineConstraint]) -> bool:
    cx = sum(p[0] for p in region) / len(region)
    cy = sum(p[1] for p in region) / len(region)
    return all(c.satisfied((cx, cy)) for c in strict)


def _strict_witness(region: Sequence[Point], i: int, obj: FractionalObjective, value: Fraction,
                    strict: Sequence[AffineConstraint], eps: Fraction) -> Point:
    """Move from the minimiser towards a strictly feasible point until within ``eps``."""
    best = region[i]
    n = len(region)
    targets = [region[(i + 1) % n], region[(i - 1) % n]]
    cx = sum(p[0] for p in region) / n
    cy = sum(p[1] for p in region) / n
    targets.append((cx, cy))
    for tgt in targets:
        if not all(c.satisfied(tgt) for c in strict):
            continue
        step = F(1, 2)
        for _ in range(400):
            q = (best[0] + step * (tgt[0] - best[0]), best[1] + step * (tgt[1] - best[1]))
            if obj(q) - value <= eps:
                return q
            step /= 2
    raise InfeasibleError("could not exhibit a strictly feasible point near the infimum")


# -- parametric sweeps ----------------------------------------------------------------

def _fit_poly(samples: Sequence[tuple[Fraction, Fraction]]) -> Poly:
    """Lagrange interpolation through the given points."""
    out = Poly()
    for i, (xi, yi) in enumerate(samples):
        if yi == 0:
            continue
        term = Poly([yi])
        for j, (xj, _) in enumerate(samples):
            if j != i:
                term = term * Poly([-xj / (xi - xj), F(1) / (xi - xj)])
        out = out + term
    return out


_FIT_NODES = tuple(F(x) for x in (0, 1, -1, 2, -2))
_CHECK_NODES = tuple(F(x) for x in (3, F(1, 3)))


class _Parametric:
    """Objective and constraints with coefficients polynomial (degree <= 4) in ``t``."""

    def __init__(self, obj_fn: Callable[[Fraction], FractionalObjective],
                 cons_fn: Callable[[Fraction], Sequence[AffineConstraint]]) -> None:
        self.obj_fn, self.cons_fn = obj_fn, cons_fn
        objs = [obj_fn(t) for t in _FIT_NODES]
        conss = [list(cons_fn(t)) for t in _FIT_NODES]
        self.num = [self._fit([o.num[i] for o in objs]) for i in range(3)]
        self.den = [self._fit([o.den[i] for o in objs]) for i in range(3)]
        ncons = len(conss[0])
        if any(len(c) != ncons for c in conss):
            raise ValueError("the number of constraints must not depend on the parameter")
        self.rels = [c.rel for c in conss[0]]
        self.cons = [tuple(self._fit([getattr(cs[j], name) for cs in conss]) for name in ("g", "h", "t"))
                     for j in range(ncons)]
        for t in _CHECK_NODES:
            o = obj_fn(t)
            ok = all(self.num[i](t) == o.num[i] and self.den[i](t) == o.den[i] for i in range(3))
            for j, c in enumerate(cons_fn(t)):
                g, h, tt = self.cons[j]
                ok = ok and g(t) == c.g and h(t) == c.h and tt(t) == c.t and c.rel == self.rels[j]
            if not ok:
                raise ValueError("sweep coefficients must be polynomial in the parameter (degree <= 4)")

    @staticmethod
    def _fit(values: Sequence[Fraction]) -> Poly:
        return _fit_poly(list(zip(_FIT_NODES, values)))


@dataclass(frozen=True)
class _Structure:
    """Symbolic description of the optimal point as a function of ``t``."""

    label: tuple
    k: RationalFunction
    l: RationalFunction
    value: RationalFunction


def _structure_at(par: _Parametric, poly: object, verts: Sequence[Point], t: Fraction) -> _Structure:
    obj = par.obj_fn(t)
    cons = list(par.cons_fn(t))
    opt = minimize(verts, obj, cons)
    x = opt.argmin
    on_line = [j for j, c in enumerate(cons) if c.slack(x) == 0]
    n = len(verts)
    one = Poly([1])
    if x in verts:
        i = verts.index(x)
        kx, lx, dx = Poly([x[0]]), Poly([x[1]]), one
        label: tuple = ("vertex", i)
    else:
        edge = None
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            if cross(a, b, x) == 0 and min(a[0], b[0]) <= x[0] <= max(a[0], b[0]) \
                    and min(a[1], b[1]) <= x[1] <= max(a[1], b[1]):
                edge = i
                break
        if edge is not None and on_line:
            j = on_line[0]
            p, q = verts[edge], verts[(edge + 1) % n]
            g, h, tt = par.cons[j]
            sn = tt - g * p[0] - h * p[1]
            sd = g * (q[0] - p[0]) + h * (q[1] - p[1])
            kx = sd * p[0] + sn * (q[0] - p[0])
            lx = sd * p[1] + sn * (q[1] - p[1])
            dx = sd
            label = ("edge", edge, j)
        elif len(on_line) >= 2:
            j1, j2 = on_line[:2]
            g1, h1, t1 = par.cons[j1]
            g2, h2, t2 = par.cons[j2]
            det = g1 * h2 - g2 * h1
            kx = t1 * h2 - t2 * h1
            lx = g1 * t2 - g2 * t1
            dx = det
            label = ("lines", j1, j2)
        else:
            raise SweepError(f"cannot identify the optimal structure at t = {t}")
    a, b, c = par.num
    d, e, f = par.den
    value = RationalFunction(a * kx + b * lx + c * dx, d * kx + e * lx + f * dx)
    st = _Structure(label, RationalFunction(kx, dx), RationalFunction(lx, dx), value)
    if st.value(t) != opt.value:
        raise SweepError(f"symbolic value disagrees with the optimum at t = {t}")
    return st


Breakpoint = Union[Fraction, QuadraticSurd, CertInterval]


@dataclass(frozen=True)
class Piece:
    """The optimum on ``[lo, hi)`` (the last piece is closed)."""

    lo: Breakpoint
    hi: Breakpoint
    value: RationalFunction
    k: RationalFunction
    l: RationalFunction
    label: tuple


@dataclass
class PiecewiseBound:
    parameter: str
    pieces: list[Piece]
    certificate: list[tuple[Fraction, Fraction]] = field(default_factory=list)

    @property
    def breakpoints(self) -> list[Breakpoint]:
        return [p.lo for p in self.pieces] + [self.pieces[-1].hi]

    def piece_at(self, t: object) -> Piece:
        """Left-closed lookup: a breakpoint belongs to the piece on its right."""
        tf = as_fraction(t)
        for i, p in enumerate(self.pieces):
            last = i == len(self.pieces) - 1
            if compare(tf, p.lo) >= 0 and (compare(tf, p.hi) < 0 or (last and compare(tf, p.hi) == 0)):
                return p
        raise ValueError(f"{t} outside the sweep range")

    def __call__(self, t: object) -> Fraction:
        return self.piece_at(t).value(as_fraction(t))

    def rows(self, var: str | None = None) -> list[dict]:
        var = var or self.parameter
        out = []
        for p in self.pieces:
            num, den = p.value.render(var)
            kn, kd = p.k.render(var)
            ln, ld = p.l.render(var)
            out.append({
                "piece_lo": _fmt_bp(p.lo), "piece_hi": _fmt_bp(p.hi),
                "expr_num": num, "expr_den": den,
                "argmin_k": kn if kd == "1" else f"({kn})/({kd})",
                "argmin_l": ln if ld == "1" else f"({ln})/({ld})",
            })
        return out


def _fmt_bp(b: Breakpoint) -> str:
    if isinstance(b, Fraction):
        return format_fraction(b)
    if isinstance(b, QuadraticSurd):
        return str(b)
    return f"[{format_fraction(b.lo)}, {format_fraction(b.hi)}]"


def _bp_bounds(b: Breakpoint) -> tuple[Fraction, Fraction]:
    if isinstance(b, CertInterval):
        return b.lo, b.hi
    if isinstance(b, QuadraticSurd):
        iv = b.enclose(96)
        return iv.lo, iv.hi
    return b, b


def sweep(poly: object, parametric_obj: Callable[[Fraction], FractionalObjective],
          parametric_constraints: Callable[[Fraction], Sequence[AffineConstraint]] = lambda t: (),
          t_range: tuple[object, object] = (0, 1), parameter: str = "t", samples: int = 32,
          box_width: object = F(1, 10 ** 12)) -> PiecewiseBound:
    """Piecewise-exact optimal value over ``t_range``.

    Coefficients must be polynomial in the parameter.  Breakpoints are roots
    of the difference between adjacent pieces' value functions: exact when
    rational or quadratic, otherwise certified boxes of width ``box_width``.
    """
    lo, hi = as_fraction(t_range[0]), as_fraction(t_range[1])
    if not lo < hi:
        raise ValueError("empty parameter range")
    verts, _ = _vertices_of(poly)
    par = _Parametric(parametric_obj, parametric_constraints)
    cache: dict[Fraction, _Structure] = {}

    def at(t: Fraction) -> _Structure:
        if t not in cache:
            cache[t] = _structure_at(par, poly, verts, t)
        return cache[t]

    def optimal(t: Fraction) -> Fraction:
        return minimize(verts, par.obj_fn(t), par.cons_fn(t)).value

    h = (hi - lo) / samples
    ts = [lo + h / 1024] + [lo + (i + F(1, 2)) * h for i in range(samples)] + [hi - h / 1024]
    structs = [at(t) for t in ts]

    def refine(t1: Fraction, s1: _Structure, t2: Fraction, s2: _Structure, depth: int) -> list[tuple[Breakpoint, _Structure]]:
        if s1.value.same_as(s2.value):
            return []
        if depth > 80:
            raise SweepError(f"could not resolve the crossover in [{t1}, {t2}]")
        poly_x = s1.value.crossing_poly(s2.value)
        roots = real_roots(poly_x, t1, t2, box_width)
        if len(roots) == 1:
            r = roots[0]
            rlo, rhi = _bp_bounds(r)
            a, b = (t1 + rlo) / 2, (rhi + t2) / 2
            # a narrower piece hiding between the two would undercut both at the root
            if t1 < rlo and rhi < t2 and optimal(a) == s1.value(a) and optimal(b) == s2.value(b) \
                    and optimal(rlo) == s1.value(rlo) and optimal(rhi) == s2.value(rhi):
                return [(r, s2)]
        m = (t1 + t2) / 2
        sm = at(m)
        return refine(t1, s1, m, sm, depth + 1) + refine(m, sm, t2, s2, depth + 1)

    cuts: list[tuple[Breakpoint, _Structure]] = []
    for (t1, s1), (t2, s2) in zip(zip(ts, structs), zip(ts[1:], structs[1:])):
        cuts.extend(refine(t1, s1, t2, s2, 0))

    pieces: list[Piece] = []
    cur_lo: Breakpoint = lo
    cur = structs[0]
    for bp, nxt in cuts:
        pieces.append(Piece(cur_lo, bp, cur.value, cur.k, cur.l, cur.label))
        cur_lo, cur = bp, nxt
    pieces.append(Piece(cur_lo, hi, cur.value, cur.k, cur.l, cur.label))

    # the first and last pieces must extend to the range ends
    for t, p in ((lo, pieces[0]), (hi, pieces[-1])):
        if optimal(t) != p.value(t):
            raise SweepError(f"piece structure does not reach the range end {t}; increase samples")

    cert = []
    for p in pieces:
        plo, _ = _bp_bounds(p.lo)
        _, phi = _bp_bounds(p.hi)
        mid = (plo + phi) / 2 if isinstance(p.lo, Fraction) and isinstance(p.hi, Fraction) \
            else (_bp_bounds(p.lo)[1] + _bp_bounds(p.hi)[0]) / 2
        v = optimal(mid)
        if v != p.value(mid):
            raise SweepError(f"piece certificate failed at t = {mid}")
        cert.append((mid, v))
    return PiecewiseBound(parameter, pieces, cert)


# -- univariate branch and bound ---------------------------------------------------

@dataclass(frozen=True)
class UnivariateMinimum:
    value: CertInterval
    argmin: CertInterval
    boxes_examined: int


def minimize_univariate(f: Callable[[CertInterval], CertInterval], lo: object, hi: object,
                        tol: object = F(1, 10 ** 6), max_boxes: int = 200000,
                        df: Callable[[CertInterval], CertInterval] | None = None) -> UnivariateMinimum:
    """Certified global minimum of ``f`` on ``[lo, hi]``.

    ``f`` must be an interval extension: for every box it returns an interval
    containing the range of the function over that box.  When an interval
    extension ``df`` of the derivative is supplied, the mean-value form
    ``f(m) + df(X)(X - m)`` is intersected with ``f(X)``, which tightens the
    bounds quadratically near a smooth minimum.  The returned value interval
    has width at most ``tol`` and contains the true minimum; the argmin
    interval contains every minimiser.
    """
    a, b = as_fraction(lo), as_fraction(hi)
    if a > b:
        raise ValueError("empty domain")
    tol = as_fraction(tol)

    def point_upper(x: Fraction) -> Fraction:
        return f(CertInterval.point(x)).hi

    def lower(box: CertInterval) -> Fraction:
        lb = f(box).lo
        if df is not None and box.width > 0:
            m = box.mid
            mv = f(CertInterval.point(m)) + df(box) * (box - m)
            lb = max(lb, mv.lo)
        return lb

    root = CertInterval(a, b)
    upper = min(point_upper(a), point_upper(b), point_upper(root.mid))
    heap: list[tuple[Fraction, int, CertInterval]] = [(lower(root), 0, root)]
    counter = 1
    while heap:
        lb, _, box = heapq.heappop(heap)
        if upper - lb <= tol or box.width == 0:
            live = [box] + [bx for l2, _, bx in heap if l2 <= upper]
            return UnivariateMinimum(CertInterval(lb, upper), CertInterval.hull(*live), counter)
        m = box.mid
        for half in (CertInterval(box.lo, m), CertInterval(m, box.hi)):
            counter += 1
            fb = lower(half)
            upper = min(upper, point_upper(half.mid))
            if fb <= upper:
                heapq.heappush(heap, (fb, counter, half))
        if counter > max_boxes:
            raise RuntimeError("branch and bound exceeded its box budget")
    raise RuntimeError("branch and bound lost every box")  # unreachable for a sound f
