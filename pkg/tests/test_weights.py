import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from convlab.polynomial import Polynomial
from convlab.weights import (FLOOR, Constant, HAbsRoot, HMax, HNorm, LogAbsPoly, LogNorm, MaxOf,
                             SaddulaevWeight, SumOf, eventually_nonincreasing, h_to_l,
                             saddulaev_transform, weight_from_dict)

s = Polynomial.variable(1, 0)
log_abs_s = LogAbsPoly(s)


def grid(count=1000, radius=6.0):
    side = int(round(math.sqrt(count)))
    t = np.linspace(-radius, radius, side)
    return [np.array([a + 1j * b]) for a in t for b in t]


def test_circle_value_matches_partial_sum_oracle():
    v, rep = saddulaev_transform(log_abs_s, [np.array([0j])], [np.array([1.0 + 0j])], j_max=40)
    # on |x| = 1: u = 0 and log|x| = 0, so v_j = max(-2^-j, -1) = -2^-j
    oracle = -sum(2.0 ** -j for j in range(1, 41))
    assert v(np.array([1.0])) == pytest.approx(oracle, abs=1e-12)
    assert abs(v(np.array([np.exp(0.4j)])) + 1) < 1e-3


def test_pole_at_floor():
    v, rep = saddulaev_transform(log_abs_s, [np.array([0j])], [], j_max=40)
    assert v.value(np.array([0.0])) == FLOOR
    assert rep["E_at_floor"]


def test_grid_bounds_and_monotone_tails():
    pts = grid()
    v, rep = saddulaev_transform(log_abs_s, [], pts, j_max=40)
    assert rep["below_log_plus"] and rep["monotone_tail"] and rep["off_finite"]
    for x in pts[::37]:
        lp = max(0.0, math.log(abs(x[0])))
        assert v(x) <= lp + 1e-6


def test_two_variable_polar_set():
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    v, rep = saddulaev_transform(LogAbsPoly(x * y), [np.array([0, 2.0])], [np.array([1.0, 1.0])])
    val = v(np.array([1.0, 1.0]))
    assert math.isfinite(val) and val <= math.log(math.sqrt(2)) + 1e-9
    assert rep["E_at_floor"] and rep["monotone_tail"]


def test_M_schedule_is_nondecreasing_and_certified():
    _, rep = saddulaev_transform(LogAbsPoly(s * s - 3), [], [], j_max=12)
    M = rep["M"]
    assert all(a <= b for a, b in zip(M, M[1:]))
    rng = np.random.Generator(np.random.Philox(key=0))
    u = LogAbsPoly(s * s - 3)
    for j, Mj in enumerate(M[:5], start=1):
        z = math.exp(2.0 ** j) * np.exp(2j * np.pi * rng.uniform(size=50))
        assert max(u(np.array([w])) for w in z) <= Mj + 1e-9


@given(st.lists(st.floats(-3, 3), min_size=2, max_size=12))
def test_eventually_nonincreasing_checks_second_half(seq):
    tail = seq[len(seq) // 2:]
    expected = all(b - a <= 1e-12 for a, b in zip(tail, tail[1:]))
    assert eventually_nonincreasing(seq) == expected


def test_h_to_l_examples():
    x0, x1 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    const = h_to_l(HAbsRoot(x0))
    assert const(np.array([5.0])) == pytest.approx(0.0)
    lg = h_to_l(HAbsRoot(x1))
    assert lg(np.array([3.0])) == pytest.approx(math.log(3))
    lp = h_to_l(HMax((HAbsRoot(x0), HAbsRoot(x1))))
    for r in (0.5, 1.0, 4.0):
        assert lp(np.array([r])) == pytest.approx(max(0.0, math.log(r)))


def test_h_norm_maps_to_log_of_shifted_norm():
    w = h_to_l(HNorm(2))
    assert w(np.array([math.sqrt(3)])) == pytest.approx(math.log(2.0))


@given(st.floats(-4, 4), st.floats(-4, 4))
def test_log_bound_dominates_values(a, b):
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    u = MaxOf((LogAbsPoly(x * y - 2), SumOf((LogNorm(2, 1.0), Constant(2, -1.0)), (0.5, 1.0))))
    pt = np.array([a, b * 1j])
    R = max(abs(a), abs(b), 1e-9)
    assert u(pt) <= u.log_bound(math.log(R)) + 1e-9


def test_weight_json_round_trip():
    u = MaxOf((LogAbsPoly(s - 1), SumOf((LogNorm(1, 1.0),), (2.0,))))
    assert weight_from_dict(u.to_dict()) == u
    with pytest.raises(ValueError):
        weight_from_dict({"kind": "spline"})
