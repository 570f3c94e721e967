"""Shared helpers: the embedded expected values and exact decimal comparisons."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any

from ..numeric import as_fraction, format_fraction
from ..polynomial import Poly, RationalFunction

F = Fraction


@lru_cache(maxsize=1)
def expected() -> dict[str, Any]:
    text = resources.files("exppairs").joinpath("data/expected.json").read_text()
    return json.loads(text)


def dec(s: str) -> Fraction:
    """Exact value of a decimal or fraction string (``"0.646"`` -> 323/500)."""
    return F(s)


def linear_piece(row: dict) -> RationalFunction:
    """``factor*(a*x + b)/den + offset`` as a rational function of ``x``."""
    f, a, b, d, off = (F(row[k]) for k in ("factor", "a", "b", "den", "offset"))
    return RationalFunction(Poly([f * b / d + off, f * a / d]), Poly([1]))


def product_piece(row: dict) -> RationalFunction:
    num = Poly([F(row["num_factor"])])
    for a, b in row["num"]:
        num = num * Poly([F(b), F(a)])
    den = Poly([F(row["den_factor"])])
    for c, d in row["den"]:
        den = den * Poly([F(d), F(c)])
    return RationalFunction(num, den)


def ceil_decimal(x: Fraction, digits: int) -> Fraction:
    scale = 10 ** digits
    return F(math.ceil(x * scale), scale)


def floor_decimal(x: Fraction, digits: int) -> Fraction:
    scale = 10 ** digits
    return F(math.floor(x * scale), scale)


def digits_of(s: str) -> int:
    return len(s.split(".")[1]) if "." in s else 0


def linear_coefficients(rf: RationalFunction) -> tuple[Fraction, Fraction]:
    """``(slope, intercept)`` of a rational function that is a polynomial of degree <= 1."""
    r = rf.normalized()
    if r.den.degree != 0 or r.num.degree > 1:
        raise ValueError(f"{rf!r} is not affine")
    c = list(r.num.c) + [F(0), F(0)]
    return c[1], c[0]


@dataclass(frozen=True)
class TablePiece:
    """One row of a reproduced table, valid on ``[lo, hi)`` (``hi=None``: unbounded)."""

    lo: Fraction
    hi: Fraction | None
    value: RationalFunction
    pair: tuple[Fraction, Fraction] | None = None

    def covers(self, x: Fraction, last: bool = False) -> bool:
        if x < self.lo:
            return False
        return self.hi is None or x < self.hi or (last and x == self.hi)


def table_rows(pieces: list[TablePiece], var: str) -> list[dict]:
    rows = []
    for p in pieces:
        num, den = p.value.render(var)
        rows.append({
            "piece_lo": format_fraction(p.lo),
            "piece_hi": "inf" if p.hi is None else format_fraction(p.hi),
            "expr_num": num, "expr_den": den,
            "argmin_k": "" if p.pair is None else format_fraction(p.pair[0]),
            "argmin_l": "" if p.pair is None else format_fraction(p.pair[1]),
        })
    return rows


def evaluate(pieces: list[TablePiece], x: object) -> Fraction:
    xf = as_fraction(x)
    for i, p in enumerate(pieces):
        if p.covers(xf, last=i == len(pieces) - 1):
            return p.value(xf)
    raise ValueError(f"{x} is outside the table")
