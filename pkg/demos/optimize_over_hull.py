"""Minimise a few fractional-linear objectives over the truncated hull H_N."""

from fractions import Fraction as F

from exppairs import FractionalObjective, build_hull, minimize, sweep
from exppairs.numeric import format_fraction


def main() -> None:
    h = build_hull(1000)
    print(f"H_1000 has {len(h.vertices)} vertices")

    for name, obj in [
        ("k + l", FractionalObjective((1, 1, 0))),
        ("(k + l + 1/2) / (1 + k)", FractionalObjective((1, 1, F(1, 2)), (1, 0, 1))),
    ]:
        opt = minimize(h, obj)
        k, l = opt.argmin
        print(f"min {name} = {format_fraction(opt.value)} at ({format_fraction(k)}, {format_fraction(l)})")

    # the optimum of k + t l is piecewise in t; each vertex of H_10 owns one range
    pw = sweep(build_hull(10), lambda t: FractionalObjective((1, t, 0)), t_range=(F(1, 2), 1))
    print(f"min k + t l over H_10, t in [1/2, 1]: {len(pw.pieces)} pieces")
    for p in pw.pieces[:5]:
        print(f"  [{p.lo}, {p.hi}): value {p.value}")


if __name__ == "__main__":
    main()
