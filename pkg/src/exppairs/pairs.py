"""Known exponent pairs and the A, B, C transforms.

Every pair carries a provenance tag naming the family it comes from.  Pairs
whose coordinates involve logarithms are stored as certified boxes
(:class:`BoxedPair`); all others are exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .geometry import Point, ProjectiveMap, point
from .numeric import CertInterval, as_fraction, format_fraction, interval_log

F = Fraction
HALF = F(1, 2)


@dataclass(frozen=True)
class ExponentPair:
    """An exact exponent pair ``(k, l)``.

    ``eps`` records whether the pair only holds up to an arbitrarily small
    positive increment.  Equality and hashing use the point only.
    """

    k: Fraction
    l: Fraction
    eps: bool = field(default=False, compare=False)
    provenance: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", as_fraction(self.k))
        object.__setattr__(self, "l", as_fraction(self.l))

    @property
    def point(self) -> Point:
        return (self.k, self.l)

    def __iter__(self):
        yield self.k
        yield self.l

    def __getitem__(self, i: int) -> Fraction:
        return (self.k, self.l)[i]

    def is_admissible(self) -> bool:
        """``0 <= k <= 1/2 <= l <= 1`` and ``k + l <= 1``."""
        return 0 <= self.k <= HALF <= self.l <= 1 and self.k + self.l <= 1

    def to_json(self) -> dict:
        return {"k": format_fraction(self.k), "l": format_fraction(self.l),
                "eps": self.eps, "provenance": self.provenance}


@dataclass(frozen=True)
class BoxedPair:
    """An exponent pair known only through certified enclosures of ``k`` and ``l``."""

    k: CertInterval
    l: CertInterval
    eps: bool = False
    provenance: str = ""
    # points whose convex hull is known to contain the pair (defaults to the box corners)
    enclosure: tuple[Point, ...] = ()

    def corners(self) -> list[Point]:
        return [(a, b) for a in (self.k.lo, self.k.hi) for b in (self.l.lo, self.l.hi)]

    def certificate_points(self) -> list[Point]:
        return list(self.enclosure) if self.enclosure else self.corners()

    def to_json(self) -> dict:
        return {"k": [format_fraction(self.k.lo), format_fraction(self.k.hi)],
                "l": [format_fraction(self.l.lo), format_fraction(self.l.hi)],
                "eps": self.eps, "provenance": self.provenance}


AnyPair = Union[ExponentPair, BoxedPair]


# -- transforms --------------------------------------------------------------

# phi1 = k, phi2 = 2k + 2, phi3 = k + l + 1
A_MAP = ProjectiveMap(((1, 0, 0), (2, 0, 2), (1, 1, 1)), name="A")
# an affine map: phi2 = 1
B_MAP = ProjectiveMap(((0, 1, F(-1, 2)), (0, 0, 1), (1, 0, HALF)), name="B")
# phi1 = k, phi2 = 12(1 + 4k), phi3 = l + 11(1 + 4k)
C_MAP = ProjectiveMap(((1, 0, 0), (48, 0, 12), (44, 1, 11)), name="C")

TRANSFORMS = {"A": A_MAP, "B": B_MAP, "C": C_MAP}


def _apply(name: str, p: Union[ExponentPair, Sequence[object]]) -> ExponentPair:
    src = p if isinstance(p, ExponentPair) else ExponentPair(p[0], p[1])
    k, l = TRANSFORMS[name](src.point)
    tag = f"{name}({src.provenance})" if src.provenance else name
    return ExponentPair(k, l, eps=src.eps, provenance=tag)


def A(p: Union[ExponentPair, Sequence[object]]) -> ExponentPair:
    """Weyl differencing: ``(k, l) -> (k/(2k+2), l/(2k+2) + 1/2)``."""
    return _apply("A", p)


def B(p: Union[ExponentPair, Sequence[object]]) -> ExponentPair:
    """Poisson summation: ``(k, l) -> (l - 1/2, k + 1/2)``."""
    return _apply("B", p)


def C(p: Union[ExponentPair, Sequence[object]]) -> ExponentPair:
    """``(k, l) -> (k/(12(1+4k)), l/(12(1+4k)) + 11/12)``."""
    return _apply("C", p)


def apply_word(word: str, p: Union[ExponentPair, Sequence[object]]) -> ExponentPair:
    """Apply a word such as ``"ABA"`` right to left, as in ``A(B(A(p)))``."""
    out = p if isinstance(p, ExponentPair) else ExponentPair(p[0], p[1])
    for ch in reversed(word):
        out = _apply(ch, out)
    return out


def convex_combination(p1: Union[ExponentPair, Sequence[object]], p2: Union[ExponentPair, Sequence[object]],
                       lam: object) -> ExponentPair:
    """``lam * p1 + (1 - lam) * p2`` for ``0 <= lam <= 1``."""
    t = as_fraction(lam)
    if not 0 <= t <= 1:
        raise ValueError(f"lambda = {t} is outside [0, 1]")
    a = p1 if isinstance(p1, ExponentPair) else ExponentPair(p1[0], p1[1])
    b = p2 if isinstance(p2, ExponentPair) else ExponentPair(p2[0], p2[1])
    tags = [q.provenance or f"({format_fraction(q.k)}, {format_fraction(q.l)})" for q in (a, b)]
    return ExponentPair(t * a.k + (1 - t) * b.k, t * a.l + (1 - t) * b.l, eps=a.eps or b.eps,
                        provenance=f"convex-combo({format_fraction(t)}, {tags[0]}, {tags[1]})")


# -- families ---------------------------------------------------------------

TRIVIAL = ExponentPair(0, 1, provenance="trivial")

BI_THETAS: tuple[Fraction, ...] = (F(9, 56), F(89, 560), F(17, 108), F(89, 570), F(32, 205), F(13, 84))

SPORADIC: tuple[tuple[Fraction, Fraction], ...] = (
    (F(2, 13), F(35, 52)),
    (F(516247, 6629696), F(5080955, 6629696)),
    (F(6299, 43860), F(29507, 43860)),
    (F(771, 8116), F(1499, 2029)),
    (F(21, 232), F(173, 232)),
    (F(1959, 21656), F(16135, 21656)),
)

# pairs obtained by combining the sporadic estimates with the decoupling theta
COMBINED: tuple[tuple[Fraction, Fraction], ...] = (
    (F(4742, 38463), F(35731, 51284)),
    (F(18, 199), F(593, 796)),
    (F(2779, 38033), F(58699, 76066)),
    (F(715, 10238), F(7955, 10238)),
)

# (m, theta) for the m-th derivative test pairs (theta, 1 - (m-1) theta)
DERIVATIVE_TESTS: tuple[tuple[int, Fraction], ...] = (
    (4, F(1, 13)),
    (8, F(1, 204)),
    (9, F(7, 2640)), (9, F(1, 360)),
    (10, F(1, 716)), (10, F(1, 649)), (10, F(7, 4540)), (10, F(1, 615)),
    (11, F(1, 915)),
)


def bi_pair(theta: object) -> ExponentPair:
    th = as_fraction(theta)
    return ExponentPair(th, th + HALF, eps=True, provenance=f"bi-theta({format_fraction(th)})")


def huxley_pair(m: int) -> ExponentPair:
    """The one-parameter family with ``k = 169/(1424*2**m - 338)``, ``m >= 1``."""
    if m < 0:
        raise ValueError("the family is indexed by m >= 0")
    k = F(169, 1424 * 2 ** m - 338)
    return ExponentPair(k, 1 - k * F(712 * m + 1577, 712), eps=True, provenance=f"huxley-family(m={m})")


def derivative_test_pair(m: int, theta: object) -> ExponentPair:
    th = as_fraction(theta)
    return ExponentPair(th, 1 - (m - 1) * th, eps=True,
                        provenance=f"derivative-test(m={m},theta={format_fraction(th)})")


def vinogradov_log_pair(m: int, bits: int | None = None) -> BoxedPair:
    """``(1/(25 m^2 (m-2) log m), 1 - 1/(25 m^2 log m))`` as certified boxes, ``m >= 3``.

    With ``x = 1/(25 m^2 log m)`` the pair is ``(x/(m-2), 1 - x)``, so it lies on
    the segment between the images of the two endpoints of the enclosure of
    ``x``; that segment is recorded as the containment certificate.
    """
    if m < 3:
        raise ValueError("the family is indexed by m >= 3")
    lg = interval_log(m, bits)
    base = 25 * m * m
    x = CertInterval(F(1) / (base * lg.hi), F(1) / (base * lg.lo))
    k = CertInterval(x.lo / (m - 2), x.hi / (m - 2))
    l = CertInterval(1 - x.hi, 1 - x.lo)
    ends = ((x.lo / (m - 2), 1 - x.lo), (x.hi / (m - 2), 1 - x.hi))
    return BoxedPair(k, l, provenance=f"vinogradov-log(m={m})", enclosure=ends)


def vinogradov_pair(m: int) -> ExponentPair:
    """``(2/((m-1)^2 (m+2)), 1 - (3m-2)/(m(m-1)(m+2)))``, ``m >= 3``."""
    if m < 3:
        raise ValueError("the family is indexed by m >= 3")
    return ExponentPair(F(2, (m - 1) ** 2 * (m + 2)), 1 - F(3 * m - 2, m * (m - 1) * (m + 2)),
                        eps=True, provenance=f"vinogradov(m={m})")


def enumerate_known_pairs(family_cap: int = 100, bits: int | None = None) -> list[AnyPair]:
    """The catalog of primitive exponent pairs.

    Infinite families are truncated at index ``family_cap`` (inclusive).
    """
    out: list[AnyPair] = [TRIVIAL]
    out.extend(bi_pair(t) for t in BI_THETAS)
    out.extend(ExponentPair(k, l, eps=True, provenance=f"sporadic({i + 1})") for i, (k, l) in enumerate(SPORADIC))
    out.extend(ExponentPair(k, l, eps=True, provenance=f"combined({i + 1})") for i, (k, l) in enumerate(COMBINED))
    out.extend(derivative_test_pair(m, th) for m, th in DERIVATIVE_TESTS)
    out.extend(huxley_pair(m) for m in range(1, family_cap + 1))
    out.extend(vinogradov_log_pair(m, bits) for m in range(3, family_cap + 1))
    out.extend(vinogradov_pair(m) for m in range(3, family_cap + 1))
    return out


def catalog_to_json(pairs: Iterable[AnyPair]) -> str:
    return json.dumps([p.to_json() for p in pairs], indent=1)


def pair_from_json(obj: dict) -> AnyPair:
    if isinstance(obj["k"], list):
        return BoxedPair(CertInterval(*map(as_fraction, obj["k"])), CertInterval(*map(as_fraction, obj["l"])),
                         eps=bool(obj.get("eps", False)), provenance=obj.get("provenance", ""))
    return ExponentPair(as_fraction(obj["k"]), as_fraction(obj["l"]), eps=bool(obj.get("eps", False)),
                        provenance=obj.get("provenance", ""))


def catalog_from_json(text: str) -> list[AnyPair]:
    return [pair_from_json(o) for o in json.loads(text)]


def as_point(p: Union[ExponentPair, Sequence[object]]) -> Point:
    if isinstance(p, ExponentPair):
        return p.point
    return point(p[0], p[1])
