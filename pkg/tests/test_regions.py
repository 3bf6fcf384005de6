from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from convlab.polynomial import Polynomial
from convlab.regions import (Hyperplane, ProjCover, Region, canonical, find_avoiding_hyperplane,
                             membership, proj_distance, region_from_dict, region_to_dict, sample)

x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
axes = Region.variety(x * y)


def test_membership_examples():
    m = membership(axes, [0, 7])
    assert m.inside and m.residual == 0
    assert not membership(Region.ball([0], 2), [3]).inside
    recips = Region.union([Region.finite([[Fraction(1, i)] for i in range(1, 11)], 1)])
    assert membership(recips, [1 / 3]).inside


def test_intersection_needs_all():
    r = Region.intersection([Region.ball([0, 0], 1), axes])
    assert r.contains([0, 0.5]).inside
    assert not r.contains([0, 3]).inside
    assert not r.contains([0.5, 0.5]).inside


def test_variety_samples_lie_on_axes():
    pts = sample(axes, 10, window=2.0, seed=3)
    assert len(pts) == 10
    for p in pts:
        assert min(abs(p[0]), abs(p[1])) == 0 or abs(p[0] * p[1]) <= 1e-9
        assert axes.contains(p).inside


def test_finite_zero_samples():
    pts = Region.finite([[0]], 1).sample(3)
    assert np.array_equal(pts, np.zeros((3, 1)))


@given(st.integers(0, 2 ** 20))
def test_samples_are_members_and_seeded(seed):
    for r in (Region.ball([0, 1j], 1.5), Region.polydisk([0], 0.5), Region.sphere([0], 1.0),
              Region.segment([-2], [2]), Region.variety(x * x + y * y - 1, window=3.0)):
        a = r.sample(12, seed=seed)
        assert np.array_equal(a, r.sample(12, seed=seed))
        assert all(r.contains(p, 1e-7).inside for p in a)


def test_cover_samples_satisfy_piece_inequalities():
    cover = ProjCover(3, 1.0)
    pts = cover.sample(5, seed=1)
    assert len(pts) == 5
    for p in pts:
        ok = False
        if proj_distance(p, [1, 0, 0]) < 1e-12:
            ok = True
        if abs(p[2]) < 1e-12 and abs(p[0]) <= abs(p[1]) + 1e-12:
            ok = True
        if abs(p[0]) ** 2 + abs(p[1]) ** 2 <= abs(p[2]) ** 2 + 1e-12:
            ok = True
        assert ok


@given(st.floats(0.5, 4.0), st.integers(0, 1000))
def test_cover_ascending_in_M(M, seed):
    small = ProjCover(3, M).sample(20, seed=seed)
    big = ProjCover(3, 2 * M)
    assert all(big.contains(p).inside for p in small)


def test_avoiding_hyperplane_for_K1_in_P2():
    cert = find_avoiding_hyperplane(ProjCover(3, 1.0), eps=0.1)
    H = cert.hyperplane
    if cert.eps == 0.1:
        assert H.distance([1, 0.1, 0]) < 1e-12
        assert H.distance([0, 1, 0.1]) < 1e-12
    assert cert.delta > 0
    pts = ProjCover(3, 1.0).sample(3000, seed=11)
    assert H.distances(pts).min() >= cert.delta_certified * (1 - 1e-9)


def test_avoiding_hyperplane_with_extra_point():
    cert = find_avoiding_hyperplane(ProjCover(3, 2.0), eps=0.1, extra_point=[0, 0, 1])
    assert cert.extra_distance is not None and cert.extra_distance > 0
    assert cert.hyperplane.distance([0, 0, 1]) > 0


def test_avoiding_hyperplane_on_projective_line():
    cert = find_avoiding_hyperplane(ProjCover(2, 1.0), eps=0.1)
    H = cert.hyperplane
    assert H.distance([1, 0]) > 0
    for t in np.linspace(-1, 1, 21):
        assert H.distance([t, 1]) > 0


def test_canonical_representative():
    v = canonical([1j, 1j])
    assert v[0].imag == 0 and v[0].real > 0
    assert np.linalg.norm(v) == pytest.approx(1.0)
    assert proj_distance([1, 2], [3j, 6j]) == pytest.approx(0.0, abs=1e-12)


def test_hyperplane_normal_is_unit():
    H = Hyperplane((3, 4))
    assert np.linalg.norm(H.normal) == pytest.approx(1.0)


def test_univariate_distance_is_exact():
    r = Region.variety(Polynomial.variable(1, 0) ** 2 - 1)
    assert r.distance([0.5]) == pytest.approx(0.5)


@pytest.mark.parametrize("region", [
    axes,
    Region.finite([[Fraction(1, 3), 0], [1, 2j]], 2),
    Region.ball([1, 0], 2.5),
    Region.union([Region.sphere([0], 1), Region.segment([0], [1j])]),
    Region.intersection([Region.polydisk([0, 0], 1), axes]),
    Region.variety(x, projective=True),
])
def test_region_json_round_trip(region):
    assert region_from_dict(region_to_dict(region)) == region


def test_region_json_rejects_unknown_kind():
    with pytest.raises(ValueError):
        region_from_dict({"kind": "torus", "n": 1})
