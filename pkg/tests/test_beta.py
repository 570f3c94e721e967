import json
from fractions import Fraction as F

import pytest

from exppairs.beta import (BetaBound, BetaEnvelope, EnvelopeGapError, dominates, dual_pairs, dual_report,
                           envelope_from_json, envelope_hull, table3_envelope)
from exppairs.pairs import COMBINED, ExponentPair

GRID = [F(j, 2000) for j in range(1001)]


def test_tabulated_envelope_rows():
    env = table3_envelope()
    assert len(env) == 20
    first, last = env.bounds[0], env.bounds[-1]
    assert (first.A, first.B, first.X, first.Y) == (F(13, 414), F(359, 414), 0, F(2848, 12173))
    assert (last.A, last.B, last.X, last.Y) == (F(13, 84), F(1, 2), F(3, 7), F(1, 2))
    sargos = next(b for b in env if b.A == F(18, 199))
    assert (sargos.B, sargos.X, sargos.Y) == (F(521, 796), F(1508, 3825), F(62831, 155153))


def test_first_row_slope_correction():
    assert table3_envelope(corrected=True).bounds[0].B == F(173, 207)
    # 173/207 is l - k of A^2(k0) = (13/414, 359/414)
    assert F(359, 414) - F(13, 414) == F(173, 207)


def test_gap_detection():
    with pytest.raises(EnvelopeGapError):
        BetaEnvelope((BetaBound(0, 1, 0, F(1, 4)), BetaBound(0, 1, F(1, 3), F(1, 2))))
    with pytest.raises(EnvelopeGapError):
        BetaEnvelope((BetaBound(0, 1, 0, F(1, 4)),))


def test_flat_envelope():
    env = BetaEnvelope((BetaBound(F(1, 2), 0, 0, F(1, 2)),))
    chain = envelope_hull(env)
    assert chain == [(0, F(1, 2)), (F(1, 2), F(1, 2))]
    (d,) = dual_pairs(chain, known={})
    assert d.pair.point == (F(1, 2), F(1, 2))


def test_dominated_piece_drops_out():
    # beta <= 1/4 + alpha on [0, 1/4], beta <= 1/2 on [1/4, 1/2]: the corner (1/4, 1/2) is on the chain;
    # with the second piece raised to 3/4 the first piece's right endpoint is no longer extreme
    env = BetaEnvelope((BetaBound(F(1, 4), 1, 0, F(1, 4)), BetaBound(F(3, 4), 0, F(1, 4), F(1, 2))))
    chain = envelope_hull(env)
    assert (F(1, 4), F(1, 2)) not in chain
    # brute-force: every chain vertex is at least the pointwise envelope on a fine grid
    for a in [F(j, 10 ** 4) for j in range(0, 5001, 7)]:
        seg = next((p, q) for p, q in zip(chain, chain[1:]) if p[0] <= a <= q[0])
        (x1, y1), (x2, y2) = seg
        assert y1 + (y2 - y1) * (a - x1) / (x2 - x1) >= env.value(a)


def test_sargos_segment_dual():
    seg = [(F(62831, 155153), F(220633, 620612)), (F(3, 7), F(31, 84))]
    (d,) = dual_pairs(seg, known={})
    assert d.pair.point == (F(4742, 38463), F(35731, 51284))


def test_vertical_segment_rejected():
    with pytest.raises(ValueError):
        dual_pairs([(F(0), F(0)), (F(0), F(1))], known={})


def test_tabulated_duals_dominate_and_contain_combined():
    env = table3_envelope()
    duals = dual_pairs(envelope_hull(env))
    pts = [d.pair.point for d in duals]
    for c in COMBINED:
        assert c in pts
    for d in duals:
        assert dominates(d.pair, env, GRID)


def test_tabulated_chain_is_concave():
    chain = envelope_hull(table3_envelope())
    slopes = [(q[1] - p[1]) / (q[0] - p[0]) for p, q in zip(chain, chain[1:])]
    assert all(a > b for a, b in zip(slopes, slopes[1:]))


def test_dominates_false_for_low_line():
    assert not dominates(ExponentPair(0, 0), table3_envelope(), GRID)


def test_envelope_json_and_report():
    env = table3_envelope()
    text = json.dumps([{"A": str(b.A), "B": str(b.B), "X": str(b.X), "Y": str(b.Y), "source": b.source}
                       for b in env])
    assert envelope_from_json(text).bounds == env.bounds
    rep = dual_report(env)
    assert rep["rows"] == 20
    assert len(rep["pairs"]) == len(rep["chain"]) - 1
