import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from convlab.pluripotential import (HullVerdict, bernstein_constant, capacity, extremal_lower,
                                    fekete_search, ghull_member, log_abs_vandermonde,
                                    transfinite_diameter, vandermonde)
from convlab.polynomial import modulus_value
from convlab.regions import Region

circle = Region.sphere([0], 1.0)


def product_vandermonde(z):
    """n = 1 oracle: prod_{i<q} (z_q - z_i)."""
    out = 1.0 + 0j
    for i, q in itertools.combinations(range(len(z)), 2):
        out *= z[q] - z[i]
    return out


def roots_of_unity_dk(k):
    z = np.exp(2j * np.pi * np.arange(k + 1) / (k + 1))
    return abs(product_vandermonde(z)) ** (1 / (k * (k + 1) / 2))


def test_vandermonde_examples():
    assert vandermonde([[0], [1], [2]]) == pytest.approx(2)
    assert vandermonde([[3], [3]]) == 0
    assert vandermonde([[0, 0], [0, 1], [1, 0]]) == pytest.approx(1)


@pytest.mark.parametrize("j", range(2, 7))
def test_vandermonde_matches_product_formula(j):
    rng = np.random.Generator(np.random.Philox(key=j))
    z = rng.normal(size=j) + 1j * rng.normal(size=j)
    assert complex(vandermonde(z[:, None])) == pytest.approx(product_vandermonde(z), rel=1e-9)


@pytest.mark.parametrize("n,j", [(n, j) for n in (1, 2) for j in range(2, 7)])
def test_vandermonde_antisymmetric_and_vanishing(n, j):
    rng = np.random.Generator(np.random.Philox(key=10 * n + j))
    pts = rng.normal(size=(j, n)) + 1j * rng.normal(size=(j, n))
    v = complex(vandermonde(pts))
    for a, b in itertools.combinations(range(j), 2):
        sw = pts.copy()
        sw[[a, b]] = sw[[b, a]]
        assert complex(vandermonde(sw)) == pytest.approx(-v, rel=1e-8, abs=1e-12)
        rep = pts.copy()
        rep[b] = rep[a]
        assert abs(complex(vandermonde(rep))) <= 1e-9 * max(1.0, abs(v))


@pytest.mark.parametrize("k", [2, 8])
def test_fekete_circle_against_roots_of_unity(k):
    cfg = fekete_search(circle, k, seed=0)
    oracle = roots_of_unity_dk(k)
    assert oracle == pytest.approx((k + 1) ** (1 / k), rel=1e-12)
    assert cfg.d_k == pytest.approx(oracle, rel=0.02)


def test_fekete_single_point():
    cfg = fekete_search(Region.finite([[0]], 1), 1)
    assert cfg.d_k == 0


def test_dk_scaling_on_optimizer_outputs():
    a = fekete_search(Region.ball([0], 1.0), 5, seed=1)
    b = fekete_search(Region.ball([0], 3.0), 5, seed=1)
    assert b.d_k / a.d_k == pytest.approx(3.0, rel=0.01)
    # matched configuration: scaling the points scales |V| by 3^(l_k)
    assert log_abs_vandermonde(3 * a.points) == pytest.approx(a.logV + a.l_k * math.log(3), rel=1e-9)


def test_fekete_monotone_under_inclusion():
    small = fekete_search(Region.ball([0], 0.5), 4, seed=2)
    big = fekete_search(Region.ball([0], 1.0), 4, seed=2)
    assert small.logV <= big.logV + 1e-6


def test_tdiam_circle():
    rep = transfinite_diameter(circle, 8)
    assert rep.d == pytest.approx(1.0, abs=0.05)
    assert not rep.pluripolar


def test_tdiam_finite_points_pluripolar():
    E = Region.finite([[i] for i in range(5)], 1)
    rep = transfinite_diameter(E, 6)
    assert rep.pluripolar and rep.d == 0
    # m_k = k + 1 > 5 from k = 5 on
    assert all(d == 0 for k, d in zip(rep.ks, rep.d_k) if k + 1 > 5)


def test_tdiam_segment_against_chebyshev_nodes():
    E = Region.segment([-2], [2])
    rep = transfinite_diameter(E, 10)
    assert rep.d == pytest.approx(1.0, abs=0.1)
    for k, d in zip(rep.ks, rep.d_k):
        nodes = 2 * np.cos(np.pi * np.arange(k + 1) / k)
        oracle = abs(product_vandermonde(nodes)) ** (1 / (k * (k + 1) / 2))
        # the search maximizes, so it cannot fall far below a feasible configuration
        assert d >= oracle * (1 - 1e-3)


@pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
def test_capacity_of_disks(rho):
    est = capacity(Region.ball([0], rho), k_max=6)
    assert est.c_lower <= est.c_upper + 1e-9
    assert est.c_lower == pytest.approx(rho, rel=0.05)
    assert est.c_upper == pytest.approx(rho, rel=0.05)


def test_capacity_half_disk_witness_value():
    est = capacity(Region.ball([0], 0.5), k_max=6, R_list=(8,))
    assert est.L_table[(6, 8.0)] == pytest.approx(2.0, rel=0.05)


def test_capacity_collapses_on_finite_sets():
    est = capacity(Region.finite([[0], [1], [2j]], 1), k_max=8)
    assert est.c_upper < 1e-3


def test_bernstein_examples():
    disk = bernstein_constant(Region.ball([0], 1.0), 4, trials=20)
    assert disk.value <= 1.0 + 1e-6
    assert bernstein_constant(Region.finite([[0]], 1), 2, trials=5).flagged
    seg = [bernstein_constant(Region.segment([-2], [2]), d, trials=20).value for d in (3, 6)]
    assert all(math.isfinite(v) for v in seg)
    assert seg[1] / seg[0] < 3


@pytest.mark.parametrize("r", [1.0, 2.0, 5.0])
def test_extremal_circle_classical(r):
    est = extremal_lower(circle, [r])
    assert est.value >= max(1.0, r) * 0.98
    assert est.value <= max(1.0, r) * (1 + 1e-6)
    assert modulus_value(est.witness, [r]) == pytest.approx(est.value, rel=1e-9)
    on_E = np.abs(est.witness.poly.evaluate_many(circle.sample(500, seed=4)))
    assert on_E.max() <= 1 + 1e-9


def test_extremal_point_set_unbounded():
    est = extremal_lower(Region.finite([[0]], 1), [1])
    assert est.per_k[-1] > 2 * est.per_k[0]
    assert est.per_k == sorted(est.per_k)


def test_extremal_nondecreasing_in_kmax():
    a = extremal_lower(Region.segment([-1], [1]), [1.5j], k_max=4, seed=2)
    b = extremal_lower(Region.segment([-1], [1]), [1.5j], k_max=8, seed=2)
    assert b.value >= a.value - 1e-12


@pytest.mark.parametrize("E,x,expected", [
    (Region.finite([[0]], 1), [1], HullVerdict.OUTSIDE_HULL),
    (Region.finite([[0]], 1), [0], HullVerdict.INSIDE_HULL),
    (circle, [5], HullVerdict.INSIDE_HULL),
    (circle, [0.3], HullVerdict.INSIDE_HULL),
])
def test_ghull_examples(E, x, expected):
    assert ghull_member(E, x).verdict == expected


@given(st.floats(0.2, 3.0))
def test_extremal_never_exceeds_classical_value(r):
    est = extremal_lower(circle, [r * np.exp(0.7j)], k_max=6, budget=20)
    assert est.value <= max(1.0, r) * (1 + 1e-6)
