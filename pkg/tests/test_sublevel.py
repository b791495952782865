import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from conftest import direct_eval
from remezlab.errors import ConstantOnLevel, DomainError, ParseError
from remezlab.sublevel import (
    CircleIntervalSet,
    LineIntervalSet,
    algebraic_sublevel,
    arcs_close,
    cheb_measure,
    deficiency,
    lebesgue,
    level_for_deficiency,
    pushforward_check,
    random_line_set,
    split_at,
    sublevel_set,
)
from remezlab.trigpoly import TWO_PI, AlgPoly, TrigPoly

BACKENDS = ["eigen", "sample"]


def grid_measure(Q, level, npts=400_000):
    t = (np.arange(npts) + 0.5) * (TWO_PI / npts)
    return TWO_PI * np.count_nonzero(np.abs(direct_eval(Q.coeffs, t)) <= level) / npts


# ---- interval sets ---------------------------------------------------------


def test_circle_set_canonical_form():
    S = CircleIntervalSet.from_arcs([(5.0, 7.0), (1.0, 2.0), (1.5, 2.5)])
    assert S.arcs == ((0.0, 7.0 - TWO_PI), (1.0, 2.5), (5.0, TWO_PI))
    assert S.measure() == pytest.approx(2.0 + 1.5)
    assert S.logical_arcs()[-1] == pytest.approx((5.0, 7.0))
    assert S.contains(6.5) and S.contains(0.3) and not S.contains(3.0)


def test_circle_set_full_and_empty():
    assert CircleIntervalSet.from_arcs([(0.0, TWO_PI)]).is_full()
    assert CircleIntervalSet.from_arcs([(1.0, 1.0 + TWO_PI)]).is_full()
    assert CircleIntervalSet.from_arcs([]).measure() == 0.0
    assert CircleIntervalSet.full().gaps() == []
    assert CircleIntervalSet.empty().gaps() == [(0.0, TWO_PI)]


@given(st.lists(st.tuples(st.floats(-20, 20), st.floats(0, 3)), max_size=6))
def test_circle_set_measure_matches_grid(pieces):
    arcs = [(lo, lo + w) for lo, w in pieces]
    S = CircleIntervalSet.from_arcs(arcs)
    t = np.linspace(0, TWO_PI, 20_001)[:-1]
    inside = np.zeros(t.size, bool)
    for lo, hi in arcs:
        inside |= ((t - lo) % TWO_PI) <= (hi - lo)
    assert lebesgue(S) == pytest.approx(TWO_PI * inside.mean(), abs=2e-3)
    assert lebesgue(S) <= TWO_PI + 1e-12
    for (a0, a1), (b0, _) in zip(S.arcs, S.arcs[1:]):
        assert a0 < a1 < b0


def test_circle_set_json_round_trip():
    S = CircleIntervalSet.from_arcs([(5.0, 7.0), (1.0, 2.0)])
    assert CircleIntervalSet.from_json_obj(json.loads(S.to_json())) == S
    with pytest.raises(ParseError):
        CircleIntervalSet.from_json_obj({"arcs": [[1.0]]})


def test_line_set_validation():
    with pytest.raises(DomainError):
        LineIntervalSet(1.0, 0.0)
    with pytest.raises(DomainError):
        LineIntervalSet(-1.0, 1.0, ((0.0, 2.0),))
    S = LineIntervalSet(-1.0, 1.0, ((0.5, 0.9), (-0.5, 0.0), (-0.1, 0.2)))
    assert S.arcs == ((-0.5, 0.2), (0.5, 0.9))


# ---- sublevel sets ---------------------------------------------------------


@pytest.mark.parametrize("backend", BACKENDS)
def test_sublevel_of_cosine(backend):
    S = sublevel_set(TrigPoly.cosine(1), 0.5, backend)
    expected = CircleIntervalSet.from_arcs([(math.pi / 3, 2 * math.pi / 3), (4 * math.pi / 3, 5 * math.pi / 3)])
    assert arcs_close(S, expected, 1e-10)


@pytest.mark.parametrize("backend", BACKENDS)
def test_deficiency_of_one_plus_two_cos(backend):
    # |1 + 2cos t| <= 1 exactly on [pi/2, 3pi/2]
    Q = TrigPoly([1, 1, 1])
    S = sublevel_set(Q, 1.0, backend)
    assert arcs_close(S, CircleIntervalSet.from_arcs([(math.pi / 2, 3 * math.pi / 2)]), 1e-9)
    assert deficiency(Q, backend) == pytest.approx(math.pi, abs=1e-9)


@pytest.mark.parametrize("backend", BACKENDS)
def test_sublevel_wraps_through_zero(backend):
    # |0.9 - cos t| <= 0.2 iff cos t >= 0.7: one arc centred on t = 0
    S = sublevel_set(0.9 - TrigPoly.cosine(1), 0.2, backend)
    half = math.acos(0.7)
    np.testing.assert_allclose(S.arcs, [(0.0, half), (TWO_PI - half, TWO_PI)], atol=1e-10)
    np.testing.assert_allclose(S.logical_arcs(), [(TWO_PI - half, TWO_PI + half)], atol=1e-10)
    np.testing.assert_allclose(S.gaps(), [(half, TWO_PI - half)], atol=1e-10)


@pytest.mark.parametrize("backend", BACKENDS)
def test_sublevel_full_and_empty(backend):
    assert sublevel_set(TrigPoly.cosine(2, 0.5), 1.0, backend).is_full()
    assert sublevel_set(TrigPoly.constant(2.0), 1.0, backend).measure() == 0.0
    assert sublevel_set(TrigPoly.cosine(2) + 3.0, 1.0, backend).measure() == 0.0
    assert sublevel_set(TrigPoly([0, 0, 0]), 1.0, backend).is_full()


def test_sublevel_tangency():
    # cos t touches level 1 at isolated points: the sublevel set is the whole circle
    for backend in BACKENDS:
        assert sublevel_set(TrigPoly.cosine(3), 1.0, backend).measure() == pytest.approx(TWO_PI, abs=1e-9)


def test_constant_on_level_raises():
    with pytest.raises(ConstantOnLevel):
        sublevel_set(TrigPoly.constant(1.0), 1.0)


def test_sublevel_bad_arguments():
    with pytest.raises(DomainError):
        sublevel_set(TrigPoly.cosine(1), 0.0)
    with pytest.raises(ValueError):
        sublevel_set(TrigPoly.cosine(1), 1.0, "magic")


@st.composite
def random_polys(draw):
    n = draw(st.integers(1, 8))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    Q = TrigPoly(rng.standard_normal(2 * n + 1) + 1j * rng.standard_normal(2 * n + 1))
    level = float(np.quantile(np.abs(Q(np.linspace(0, TWO_PI, 512))), draw(st.floats(0.05, 0.95))))
    return Q, level


@given(random_polys())
def test_backends_agree(case):
    Q, level = case
    A = sublevel_set(Q, level, "eigen")
    B = sublevel_set(Q, level, "sample")
    assert arcs_close(A, B, 1e-7)


@given(random_polys())
def test_sublevel_measure_matches_grid(case):
    Q, level = case
    assert sublevel_set(Q, level).measure() == pytest.approx(grid_measure(Q, level), abs=1e-3)


@given(random_polys())
def test_sublevel_endpoints_are_on_the_level(case):
    Q, level = case
    for lo, hi in sublevel_set(Q, level).arcs:
        for t in (lo, hi):
            if 0.0 < t < TWO_PI:
                assert abs(abs(Q(t)) - level) <= 1e-8 * max(1.0, level)


@given(random_polys())
def test_sublevel_monotone_in_level(case):
    Q, level = case
    assert sublevel_set(Q, 0.9 * level).measure() <= sublevel_set(Q, level).measure() + 1e-12


def test_large_dynamic_range_falls_back_cleanly():
    from remezlab.extremal import extremal_even

    Q = extremal_even(6, 5.5)
    for backend in BACKENDS:
        S = sublevel_set(Q, 1.0, backend)
        assert len(S.arcs) == 1
        assert S.arcs[0][0] == pytest.approx(2.75, abs=1e-7)
        assert S.arcs[0][1] == pytest.approx(TWO_PI - 2.75, abs=1e-7)


@pytest.mark.parametrize("s", [0.3, 1.0, math.pi, 5.0])
def test_level_for_deficiency(rng, s):
    for n in (1, 3, 7):
        Q = TrigPoly(rng.standard_normal(2 * n + 1) + 1j * rng.standard_normal(2 * n + 1))
        lam = level_for_deficiency(Q, s)
        d = deficiency(Q / lam)
        assert s - 1e-8 <= d <= s + 1e-12


# ---- arcsine measure -------------------------------------------------------


def quad_measure(a, b, S):
    half, mid = (b - a) / 2, (a + b) / 2

    def density(x):
        return half / math.sqrt(max(half * half - (x - mid) ** 2, 1e-300))

    return sum(integrate.quad(density, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)[0] for lo, hi in S.arcs)


def test_cheb_measure_total_mass():
    assert cheb_measure(-1.0, 1.0, LineIntervalSet(-1.0, 1.0, ((-1.0, 1.0),))) == pytest.approx(math.pi, rel=1e-15)
    assert cheb_measure(0.0, 4.0, LineIntervalSet(0.0, 4.0, ((0.0, 4.0),))) == pytest.approx(2 * math.pi, rel=1e-15)


@given(st.integers(0, 2**32 - 1), st.floats(-5, 5), st.floats(0.01, 5))
def test_cheb_measure_against_quadrature(seed, a, width):
    rng = np.random.default_rng(seed)
    b = a + width
    S = random_line_set(rng, a, b)
    assert cheb_measure(a, b, S) == pytest.approx(quad_measure(a, b, S), rel=1e-8, abs=1e-12)


def test_cheb_measure_rejects_outside():
    with pytest.raises(DomainError):
        cheb_measure(0.0, 1.0, LineIntervalSet(-1.0, 1.0, ((-0.5, 0.5),)))


@given(st.integers(0, 2**32 - 1), st.floats(-0.99, 0.99))
def test_split_at_is_additive(seed, cut):
    S = random_line_set(np.random.default_rng(seed), -1.0, 1.0)
    left, right = split_at(S, cut)
    total = cheb_measure(-1.0, 1.0, S)
    parts = cheb_measure(-1.0, 1.0, LineIntervalSet(-1.0, 1.0, left.arcs)) + cheb_measure(
        -1.0, 1.0, LineIntervalSet(-1.0, 1.0, right.arcs)
    )
    assert parts == pytest.approx(total, rel=1e-12, abs=1e-14)


def test_algebraic_sublevel_examples():
    # |2x + 1| <= 1 on [-1, 0]
    S = algebraic_sublevel(AlgPoly([1.0, 2.0]))
    np.testing.assert_allclose(S.arcs, [(-1.0, 0.0)], atol=1e-14)
    # |x^2| <= 1/4 on [-1/2, 1/2]
    S = algebraic_sublevel(AlgPoly([0.0, 0.0, 1.0]), level=0.5)
    np.testing.assert_allclose(S.arcs, [(-math.sqrt(0.5), math.sqrt(0.5))], rtol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_pushforward(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    c = rng.standard_normal(n + 1)
    Q = TrigPoly(np.concatenate([c[:0:-1], c]) * rng.uniform(0.2, 2.0))
    left, right = pushforward_check(Q)
    assert left == pytest.approx(right, abs=1e-7)
