"""Exact planar geometry over the rationals.

Convex hulls, point-in-polygon tests and projective maps of the plane.  All
predicates are exact; nothing here touches floating point.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .numeric import as_fraction

Point = tuple[Fraction, Fraction]


class DegenerateHullError(ValueError):
    """Fewer than three non-collinear input points."""


class SingularMapError(ValueError):
    """A projective map's denominator vanishes or changes sign on the input."""


def point(k: object, l: object) -> Point:
    return (as_fraction(k), as_fraction(l))


def cross(o: Point, a: Point, b: Point) -> Fraction:
    """Twice the signed area of triangle ``o, a, b`` (positive if counter-clockwise)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orientation(o: Point, a: Point, b: Point) -> int:
    c = cross(o, a, b)
    return (c > 0) - (c < 0)


def convex_hull(points: Iterable[Sequence[object]]) -> list[Point]:
    """Vertices of the convex hull, counter-clockwise from the lexicographic minimum.

    Collinear boundary points are dropped.
    """
    pts = sorted({point(p[0], p[1]) for p in points})
    if len(pts) < 3:
        raise DegenerateHullError(f"need at least 3 distinct points, got {len(pts)}")
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateHullError("input points are collinear")
    return hull


@dataclass(frozen=True)
class Polygon:
    """A convex polygon given by counter-clockwise vertices.

    Membership uses binary search over the lower and upper chains;
    :meth:`contains_linear` is the plain all-edges test.
    """

    vertices: tuple[Point, ...]
    _lower: tuple[Point, ...] = field(init=False, repr=False, compare=False)
    _upper: tuple[Point, ...] = field(init=False, repr=False, compare=False)
    _lx: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)
    _ux: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        vs = tuple(point(*v) for v in self.vertices)
        if len(vs) < 3:
            raise DegenerateHullError("a polygon needs at least 3 vertices")
        object.__setattr__(self, "vertices", vs)
        # split at the lexicographic max; the list starts at the lexicographic min
        start = vs.index(min(vs))
        vs = vs[start:] + vs[:start]
        top = vs.index(max(vs))
        lower = vs[: top + 1]
        upper = tuple(reversed(vs[top:] + vs[:1]))  # ascending x as well
        object.__setattr__(self, "_lower", lower)
        object.__setattr__(self, "_upper", upper)
        object.__setattr__(self, "_lx", tuple(p[0] for p in lower))
        object.__setattr__(self, "_ux", tuple(p[0] for p in upper))

    @classmethod
    def hull_of(cls, points: Iterable[Sequence[object]]) -> "Polygon":
        return cls(tuple(convex_hull(points)))

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def _side(self, chain: Sequence[Point], xs: Sequence[Fraction], q: Point) -> int:
        # xs[0] < q.x < xs[-1]; any vertical pieces sit at the chain ends
        i = bisect_right(xs, q[0]) - 1
        c = cross(chain[i], chain[i + 1], q)
        return (c > 0) - (c < 0)

    def locate(self, q: Sequence[object]) -> int:
        """1 strictly inside, 0 on the boundary, -1 outside."""
        q = point(q[0], q[1])
        xmin, xmax = self._lx[0], self._lx[-1]
        if q[0] < xmin or q[0] > xmax:
            return -1
        if q[0] == xmin or q[0] == xmax:
            ys = [v[1] for v in self.vertices if v[0] == q[0]]
            return 0 if min(ys) <= q[1] <= max(ys) else -1
        lo = self._side(self._lower, self._lx, q)
        hi = -self._side(self._upper, self._ux, q)
        if lo < 0 or hi < 0:
            return -1
        return 1 if lo > 0 and hi > 0 else 0

    def contains(self, q: Sequence[object], strict: bool = False) -> bool:
        loc = self.locate(q)
        return loc > 0 if strict else loc >= 0

    def contains_linear(self, q: Sequence[object], strict: bool = False) -> bool:
        """Reference membership test against every edge half-plane."""
        q = point(q[0], q[1])
        for a, b in self.edges():
            c = cross(a, b, q)
            if c < 0 or (strict and c == 0):
                return False
        return True

    def vertex_index(self, q: Point) -> int | None:
        try:
            return self.vertices.index(q)
        except ValueError:
            return None

    def edge_containing(self, q: Point) -> tuple[int, int] | None:
        """Indices ``(i, i+1)`` of an edge whose closed segment holds ``q``."""
        n = len(self.vertices)
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            if cross(a, b, q) == 0 and min(a[0], b[0]) <= q[0] <= max(a[0], b[0]) \
                    and min(a[1], b[1]) <= q[1] <= max(a[1], b[1]):
                return (i, (i + 1) % n)
        return None


def clip_halfplane(vertices: Sequence[Point], g: Fraction, h: Fraction, t: Fraction) -> list[Point]:
    """Clip a convex polygon (possibly degenerate) to ``g*k + h*l >= t``.

    Sutherland-Hodgman with exact arithmetic; the result may be a polygon,
    a segment, a single point or empty.
    """
    out: list[Point] = []
    n = len(vertices)
    if n == 0:
        return out
    vals = [g * p[0] + h * p[1] - t for p in vertices]
    for i in range(n):
        p, vp = vertices[i], vals[i]
        q, vq = vertices[(i + 1) % n], vals[(i + 1) % n]
        if vp >= 0:
            out.append(p)
        if (vp > 0 and vq < 0) or (vp < 0 and vq > 0):
            s = vp / (vp - vq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    dedup: list[Point] = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    while len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


@dataclass(frozen=True)
class ProjectiveMap:
    """``(k, l) -> (phi1/phi2, phi3/phi2)`` with affine ``phi_i = a_i*k + b_i*l + c_i``.

    ``coeffs`` is ``((a1, b1, c1), (a2, b2, c2), (a3, b3, c3))``.
    """

    coeffs: tuple[tuple[Fraction, Fraction, Fraction], ...]
    name: str = ""

    def __post_init__(self) -> None:
        rows = tuple(tuple(as_fraction(x) for x in row) for row in self.coeffs)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("a projective map needs a 3x3 coefficient table")
        object.__setattr__(self, "coeffs", rows)

    def phi(self, i: int, p: Point) -> Fraction:
        a, b, c = self.coeffs[i]
        return a * p[0] + b * p[1] + c

    def __call__(self, p: Sequence[object]) -> Point:
        p = point(p[0], p[1])
        d = self.phi(1, p)
        if d == 0:
            raise SingularMapError(f"{self.name or 'map'}: phi2 vanishes at {p}")
        return (self.phi(0, p) / d, self.phi(2, p) / d)

    def compose(self, other: "ProjectiveMap") -> "ProjectiveMap":
        """The map ``self(other(.))`` (as a matrix product)."""
        # homogeneous rows: (phi1, phi2, phi3) = M @ (k, l, 1); output point (x, y, w)=(phi1, phi3, phi2)
        def mat(m: ProjectiveMap) -> list[list[Fraction]]:
            r1, r2, r3 = m.coeffs
            return [list(r1), list(r3), list(r2)]

        a, b = mat(self), mat(other)
        prod = [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
        return ProjectiveMap((tuple(prod[0]), tuple(prod[2]), tuple(prod[1])),
                             name=f"{self.name}{other.name}")


def segment_image_is_segment(pm: ProjectiveMap, p1: Sequence[object], p2: Sequence[object],
                             samples: int = 16) -> bool:
    """Check that ``pm`` maps the segment ``[p1, p2]`` onto the segment between the images.

    At ``samples + 1`` rational parameters the image must be collinear with
    the image endpoints, lie between them, and its position ``mu`` must be
    monotone in ``lambda`` and agree with
    ``mu = lambda*phi2(p1) / (lambda*phi2(p1) + (1-lambda)*phi2(p2))``.

    Raises :class:`SingularMapError` when ``phi2`` is zero somewhere on the
    closed segment (its sign at the endpoints must agree).
    """
    a, b = point(p1[0], p1[1]), point(p2[0], p2[1])
    d1, d2 = pm.phi(1, a), pm.phi(1, b)
    if d1 == 0 or d2 == 0 or (d1 > 0) != (d2 > 0):
        raise SingularMapError(f"phi2 is not sign-definite on the segment {a} -- {b}")
    ia, ib = pm(a), pm(b)
    prev_mu: Fraction | None = None
    for j in range(samples + 1):
        lam = Fraction(j, samples)
        q = (lam * a[0] + (1 - lam) * b[0], lam * a[1] + (1 - lam) * b[1])
        img = pm(q)
        expected_mu = lam * d1 / (lam * d1 + (1 - lam) * d2)
        if ia == ib:
            if img != ia:
                return False
            continue
        if cross(ib, ia, img) != 0:
            return False
        axis = 0 if ia[0] != ib[0] else 1
        mu = (img[axis] - ib[axis]) / (ia[axis] - ib[axis])
        if mu != expected_mu or not (0 <= mu <= 1):
            return False
        if prev_mu is not None and mu < prev_mu:
            return False
        prev_mu = mu
    return True
