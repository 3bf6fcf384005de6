import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from convlab.polynomial import Polynomial
from convlab.series import (Affine, ExponentCollision, Scale, SeriesSpec, TermRule, Verdict,
                            check_class, classify, hartogs_joint_check, normalize_to_10,
                            restrict_affine, restrict_projective)

s = Polynomial.variable(1, 0)
x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)


def geometric(base):
    return SeriesSpec(base.n, (TermRule(base, k_start=1),))


def test_geometric_series_converges():
    assert classify(restrict_affine(geometric(s), [7], 64)).kind == Verdict.CONVERGES


def test_k_to_the_k_diverges():
    spec = SeriesSpec(1, (TermRule(Polynomial.constant(1, 1), Scale("k^k"), k_start=1),))
    assert classify(restrict_affine(spec, [0.3], 64)).kind == Verdict.DIVERGES


def test_dense_classifier_on_factorial_growth():
    c = [math.factorial(j) for j in range(65)]
    assert classify(c).kind == Verdict.DIVERGES
    assert classify([2.0 ** j for j in range(65)]).kind == Verdict.CONVERGES


def test_zero_stream_converges():
    v = classify(np.zeros(65))
    assert v.kind == Verdict.CONVERGES


def test_restrict_matches_materialized_coefficients():
    spec = SeriesSpec(2, (TermRule(x * y - 1, Scale("k^k"), Affine(1, 0), Affine(2, 0), 1),))
    pt = np.array([0.4 + 0.1j, -1.2])
    stream = restrict_affine(spec, pt, 20)
    dense = stream.dense()
    for q, P in spec.materialize(20):
        assert dense[q] == pytest.approx(complex(P.evaluate(list(pt))), rel=1e-9)


def test_exponent_collision_detected():
    spec = SeriesSpec(1, (TermRule(s, k_start=1), TermRule(s * s, exponent=Affine(2, 0), k_start=1)))
    with pytest.raises(ExponentCollision):
        spec.terms(10)


def test_constant_exponent_needs_stop():
    with pytest.raises(ValueError):
        TermRule(s, exponent=Affine(0, 3))


def test_check_class():
    spec = SeriesSpec(1, (TermRule(s, power=Affine(2, 0), k_start=1),))
    assert not check_class(spec, 1, 0, 16)
    assert check_class(spec, 2, 0, 16)


def test_normalize_to_10_shifts_exponents():
    spec = SeriesSpec(1, (TermRule(s, power=Affine(2, 0), k_start=1),))
    g = normalize_to_10(spec, 2, 1)
    assert g.exponents(30) == [3 * (k + 1) for k in range(1, 10)]
    assert check_class(g, 1, 0, 60)


def test_normalize_rejects_wrong_class():
    spec = SeriesSpec(1, (TermRule(s, power=Affine(2, 0), k_start=1),))
    with pytest.raises(ValueError):
        normalize_to_10(spec, 1, 0)


def test_projective_restriction_requires_homogeneity():
    spec = SeriesSpec(2, (TermRule(x + y, k_start=1),), projective=True)
    restrict_projective(spec, [1, 2], 10)
    with pytest.raises(ValueError):
        SeriesSpec(2, (TermRule(x + 1, k_start=1),), projective=True)
    with pytest.raises(ValueError):
        restrict_projective(spec, [0, 0], 10)


@given(st.floats(-6, 3), st.floats(0, 2 * math.pi))
def test_projective_restriction_scales_exactly(log_lam, arg):
    # H_q(lam x) = lam^q H_q(x): log|c_q| shifts by q log|lam|, even where
    # lam^q underflows a float and with the zero tolerance switched on
    spec = SeriesSpec(2, (TermRule((x - 2 * y) * (x + y), Scale("k^k"), Affine(1, 0), Affine(2, 0), 1),),
                      projective=True)
    lam = math.exp(log_lam) * complex(math.cos(arg), math.sin(arg))
    base = restrict_projective(spec, [1.0, 0.3j], 400, zero_tol=1e-9)
    scaled = restrict_projective(spec, [lam, 0.3j * lam], 400, zero_tol=1e-9)
    assert np.all(np.isfinite(scaled.log_abs))
    np.testing.assert_allclose(scaled.log_abs, base.log_abs + base.exponents * log_lam, rtol=1e-9, atol=1e-6)


def test_classifier_ignores_window_edge_of_interleaved_families():
    # two k^k families at even and odd exponents; the odd one dominates and is
    # the only source of new maxima inside the window
    spec = SeriesSpec(1, (TermRule(s + 1.2j, Scale("k^k"), Affine(1, 0), Affine(2, 0), 1),
                          TermRule(s, Scale("k^k"), Affine(1, 0), Affine(2, 1), 1)))
    pt = np.array([0.61 - 0.78j])
    assert classify(spec.restrict(pt, 64)).kind == Verdict.DIVERGES
    g = normalize_to_10(spec, 1, 3)
    assert classify(g.restrict(pt, 4 * 65)).kind == Verdict.DIVERGES


def test_zero_tolerance_snaps_roundoff():
    spec = SeriesSpec(1, (TermRule(s - 0.1, Scale("k^k"), k_start=1),))
    pt = np.array([0.1 + 1e-15])
    assert classify(spec.restrict(pt, 64, zero_tol=1e-9)).kind == Verdict.CONVERGES


def test_hartogs_joint_divergence_of_variety_series():
    spec = SeriesSpec(2, (TermRule(x * y, Scale("k^k"), Affine(1, 0), Affine(2, 0), 1),))
    assert hartogs_joint_check(spec, 64).kind == Verdict.DIVERGES


def test_hartogs_joint_convergence_of_geometric():
    spec = SeriesSpec(2, (TermRule(x + y, k_start=1),))
    assert hartogs_joint_check(spec, 64).kind == Verdict.CONVERGES


def test_spec_json_round_trip_with_blocks():
    spec = SeriesSpec(1, (TermRule.single(3, s, 1, Scale("m_pow", 1.0, m=2.0, a=0.0, b=2.0)),
                          TermRule.single(5, s * s, 2)), blocks=(1, 2))
    assert SeriesSpec.from_dict(spec.to_dict()) == spec


def test_spec_json_rejects_unknown_rule():
    with pytest.raises(ValueError):
        SeriesSpec.from_dict({"n": 1, "rules": [{"kind": "mystery"}]})


@given(st.integers(1, 4), st.integers(0, 3), st.floats(0.1, 3.0))
def test_geometric_rate_equals_modulus(power, shift, r):
    spec = SeriesSpec(1, (TermRule(s, power=Affine(power, 0), exponent=Affine(power, shift), k_start=1),))
    stream = restrict_affine(spec, [r], 400)
    rates = stream.rates()
    # |s^(p k)|^(1/(p k + b)) tends to |s|
    assert rates[-1] == pytest.approx(r, rel=0.05)
