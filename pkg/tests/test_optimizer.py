import random
from fractions import Fraction as F

import pytest

from exppairs.geometry import Polygon
from exppairs.hull import build_hull, vertex
from exppairs.numeric import CertInterval, QuadraticSurd
from exppairs.optimizer import (AffineConstraint, DenominatorSignError, FractionalObjective, InfeasibleError,
                                maximize, minimize, minimize_univariate, sweep)

SQUARE = Polygon.hull_of([(0, 0), (1, 0), (1, 1), (0, 1)])
HYBRID = FractionalObjective((11, 1, 0), (8, 0, 1))
HYBRID_CONS = [AffineConstraint(3, 1, 1, "<")]


def test_hybrid_program():
    res = minimize(build_hull(1000), HYBRID, HYBRID_CONS)
    assert res.value == F(309, 320)
    assert res.argmin == (F(1, 56), F(127, 140)) == vertex(9)
    assert res.attained


def test_k_plus_l():
    res = minimize(build_hull(1000), FractionalObjective((1, 1, 0)))
    assert res.value == F(17, 21)
    assert res.argmin == (F(13, 84), F(55, 84))


def test_linear_on_square():
    res = minimize(SQUARE, FractionalObjective((1, 0, 0)))
    assert res.value == 0 and res.argmin[0] == 0
    assert maximize(SQUARE, FractionalObjective((1, 1, 0))).value == 2


def test_infeasible():
    with pytest.raises(InfeasibleError):
        minimize(build_hull(100), FractionalObjective((1, 1, 0)), [AffineConstraint(1, 0, 1, ">=")])


def test_strict_constraint_gives_infimum_and_witness():
    # min k over the square with k > 1/2: infimum 1/2, not attained
    res = minimize(SQUARE, FractionalObjective((1, 0, 0)), [AffineConstraint(1, 0, F(1, 2), ">")])
    assert res.value == F(1, 2) and not res.attained
    w = res.witness
    assert w[0] > F(1, 2) and w[0] - F(1, 2) <= F(1, 10 ** 12)
    with pytest.raises(InfeasibleError):
        minimize(SQUARE, FractionalObjective((1, 0, 0)), [AffineConstraint(1, 0, 1, ">")])


def test_denominator_sign_change_refused():
    obj = FractionalObjective((1, 0, 0), (1, 0, F(-1, 2)))
    with pytest.raises(DenominatorSignError):
        minimize(SQUARE, obj)


def test_equality_constraint():
    res = minimize(SQUARE, FractionalObjective((0, 1, 0)), [AffineConstraint(1, -1, 0, "==")])
    assert res.value == 0 and res.argmin == (0, 0)


def _brute_force(verts, obj, cons):
    """Objective over feasible vertices and all edge/constraint-line crossings."""
    cands = list(verts)
    n = len(verts)
    for c in cons:
        for i in range(n):
            p, q = verts[i], verts[(i + 1) % n]
            sp, sq = c.slack(p), c.slack(q)
            if sp != sq and (sp <= 0 <= sq or sq <= 0 <= sp):
                s = sp / (sp - sq)
                cands.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    feas = [p for p in cands if all(c.satisfied(p, closed=True) for c in cons)]
    return min(obj(p) for p in feas) if feas else None


def _random_objective(rng):
    r = lambda: F(rng.randint(-30, 30), rng.randint(1, 12))
    d, e = r(), r()
    f = abs(d) / 2 + abs(e) + F(rng.randint(1, 20), 7)
    return FractionalObjective((r(), r(), r()), (d, e, f))


def test_vertex_oracle_random_objectives():
    rng = random.Random(2024)
    h = build_hull(100)
    for _ in range(60):
        obj = _random_objective(rng)
        cons = []
        if rng.random() < 0.5:
            # a line through an interior point of H keeps the region non-empty
            g, hh = F(rng.randint(-5, 5)), F(rng.randint(-5, 5))
            if g or hh:
                cons.append(AffineConstraint(g, hh, g * F(1, 6) + hh * F(3, 4), rng.choice([">=", "<="])))
        assert minimize(h, obj, cons).value == _brute_force(h.vertices, obj, cons)


def test_grid_dominance():
    rng = random.Random(99)
    h = build_hull(100)
    verts = h.vertices
    obj = _random_objective(rng)
    best = minimize(h, obj).value
    for _ in range(10 ** 4):
        i, j, k = (rng.randrange(len(verts)) for _ in range(3))
        a, b = F(rng.randint(0, 100), 100), F(rng.randint(0, 100), 100)
        w = [a * b, a * (1 - b), 1 - a]
        p = tuple(sum(wi * verts[x][c] for wi, x in zip(w, (i, j, k))) for c in (0, 1))
        assert best <= obj(p)


def test_sweep_constant_single_piece():
    pb = sweep(SQUARE, lambda t: FractionalObjective((1, 1, 0)), t_range=(0, 1))
    assert len(pb.pieces) == 1
    assert pb.breakpoints == [0, 1]
    assert pb(F(1, 2)) == 0


def test_sweep_linear_breakpoint():
    pb = sweep(SQUARE, lambda t: FractionalObjective((1, -t, 0)), t_range=(-1, 1))
    assert pb.breakpoints == [-1, 0, 1]
    assert pb(F(-1, 2)) == 0 and pb(F(1, 2)) == F(-1, 2)
    # left-closed: the breakpoint belongs to the right piece, values agree there
    left, right = pb.pieces
    assert left.value(F(0)) == right.value(F(0))


def test_sweep_quadratic_breakpoint_is_a_surd():
    pb = sweep(SQUARE, lambda t: FractionalObjective((t * t - 2, 1, 0)), t_range=(0, 2))
    assert len(pb.pieces) == 2
    bp = pb.pieces[0].hi
    assert isinstance(bp, QuadraticSurd) and bp == QuadraticSurd.sqrt(2)


def test_univariate_quadratic():
    res = minimize_univariate(lambda x: (x - 1) * (x - 1), 0, 2, F(1, 10 ** 6))
    assert res.value.contains(0)
    assert res.argmin.contains(1)
    assert res.value.width <= F(1, 10 ** 6)


def test_univariate_with_derivative():
    f = lambda x: (x - F(1, 3)) * (x - F(1, 3)) + 5
    df = lambda x: 2 * (x - F(1, 3))
    res = minimize_univariate(f, -3, 3, F(1, 10 ** 9), df=df)
    assert res.value.contains(5) and res.argmin.contains(F(1, 3))


def test_univariate_rejects_empty_domain():
    with pytest.raises(ValueError):
        minimize_univariate(lambda x: x, 1, 0)
    with pytest.raises(RuntimeError):
        minimize_univariate(lambda x: CertInterval(x.lo - 1, x.hi + 1), 0, 1, F(1, 10 ** 6), max_boxes=50)
