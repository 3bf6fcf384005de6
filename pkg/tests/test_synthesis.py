import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from convlab.polynomial import NormedPoly, Polynomial
from convlab.regions import Region
from convlab.series import SeriesSpec, TermRule, Verdict, check_class
from convlab.synthesis import (InfeasibleBeta, beta_construct, block_verdict, choose_beta,
                               synth_block, synth_enumeration, synth_projective, synth_variety,
                               variety_spec, verify)

s = Polynomial.variable(1, 0)
x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
recip_components = [s - Fraction(1, i) for i in range(1, 9)]
recip_target = Region.union([Region.variety(c) for c in recip_components])


@pytest.fixture(scope="module")
def recip_block():
    return synth_block(recip_components, probes=[(Fraction(1, 3),), (0.4,), (0.0,), (1.5j,)], seed=7)


@pytest.fixture(scope="module")
def line_projective():
    return synth_projective([x], m_max=4, probes=[(0, 1), (1, 1), (2, 2), (1j, -3)], seed=2)


def brute_beta(r, m, b_max, ell=1.0):
    """Largest a/b < 1 (b <= b_max) with (r/m)^beta ell^(1-beta) > 1/2, by enumeration."""
    ok = [Fraction(a, b) for b in range(2, b_max + 1) for a in range(1, b)
          if (r / m) ** (a / b) * ell ** (1 - a / b) > 0.5]
    return max(ok)


# variety synthesizer

def test_variety_axes_examples():
    rep = synth_variety(x * y, probes=[(0, 5), (1, 1)])
    kinds = [p.verdict.kind for p in rep.probes]
    assert kinds == [Verdict.CONVERGES, Verdict.DIVERGES]
    stream = rep.spec.restrict(np.array([1.0, 1.0]), 64)
    for q, c in zip(stream.exponents, stream.values):
        k = q // 2
        assert abs(c) == pytest.approx(float(k) ** k, rel=1e-9)


def test_variety_line_examples():
    rep = synth_variety(s - 1, probes=[(1,), (0,)])
    assert [p.verdict.kind for p in rep.probes] == [Verdict.CONVERGES, Verdict.DIVERGES]
    assert rep.hartogs.kind == Verdict.DIVERGES


def test_variety_rejects_constant():
    with pytest.raises(ValueError):
        synth_variety(Polynomial.constant(1, 3))


def test_variety_spec_is_class_10():
    assert check_class(variety_spec(x * x + y * y), 1, 0, 200)


# beta construction

@pytest.mark.parametrize("r,m,b_max", [(0.7, 2, 8), (0.3, 5, 64), (1.0, 1, 16), (2.0, 2, 8), (0.05, 3, 64)])
def test_choose_beta_matches_enumeration(r, m, b_max):
    a, b = choose_beta(r, m, b_max)
    assert Fraction(a, b) == brute_beta(r, m, b_max)


def test_choose_beta_example_value():
    assert choose_beta(0.7, 2, 8) == (5, 8)


def test_choose_beta_infeasible():
    with pytest.raises(InfeasibleBeta):
        choose_beta(1e-6, 4, 8)


def test_beta_witness_on_zero_set():
    p = NormedPoly(s * 0.25, 1)
    w = beta_construct(p, 2, 0.3, [1.5], samples=[[0.0]])
    res = w.check([[0.0]])
    assert res["i"] == (True, 0.0)
    assert res["iii"][0]


def test_beta_precondition_failure():
    p = NormedPoly(s * 0.25, 1)
    with pytest.raises(ValueError):
        beta_construct(p, 2, 0.9, [1.0])


@given(st.floats(0.1, 1.9), st.integers(2, 6), st.floats(-3, 3), st.floats(-3, 3))
def test_beta_witness_two_routes_agree(r, m, a, b):
    p = NormedPoly((s - 0.5) * 0.2, 1)
    yv = complex(a, b)
    if abs(complex(p.poly.evaluate([yv]))) < r:
        return
    w = beta_construct(p, m, r, [yv])
    pt = np.array([[0.3 - 0.7j]])
    direct = abs(complex(w.h_polynomial().evaluate([0.3 - 0.7j]))) ** (1 / w.q)
    assert w.modulus(pt)[0] == pytest.approx(direct, rel=1e-9)
    assert w.check()["iii"][0]


def test_block_verdict_rules():
    assert block_verdict({1: 0.5, 2: 0.0}).kind == Verdict.CONVERGES
    assert block_verdict({1: 0.4, 2: 1.1, 3: 1.6, 4: 2.1}).kind == Verdict.DIVERGES
    assert block_verdict({1: 0.4, 2: 0.4, 3: 0.4, 4: 0.4}).kind == Verdict.INDETERMINATE


# block synthesizer

def test_block_examples(recip_block):
    third, point4, zero, far = recip_block.probes
    assert third.verdict.kind == Verdict.CONVERGES
    rates = {int(k): v for k, v in third.detail["block_rates"].items()}
    assert all(rates[m] == 0 for m in range(3, 9))
    assert max(rates[1], rates[2]) <= 2
    assert point4.verdict.kind == Verdict.DIVERGES
    assert zero.verdict.kind == Verdict.DIVERGES
    assert recip_block.exactness.value == "WINDOWED"
    assert recip_block.all_correct


def test_block_witness_clauses_on_fresh_samples(recip_block):
    rng = np.random.Generator(np.random.Philox(key=1234))
    G = (rng.normal(size=(3000, 1)) + 1j * rng.normal(size=(3000, 1))) * np.exp(rng.uniform(-3, 5, (3000, 1)))
    for w in recip_block.witnesses:
        E = np.array([[1 / i] for i in range(1, int(w.m) + 1)])
        res = w.check(E, G, tol=1e-6)
        assert all(ok for ok, _ in res.values()), res


def test_block_spec_structure(recip_block):
    spec = recip_block.spec
    qs = spec.exponents(spec.max_exponent())
    assert qs == sorted(set(qs))
    assert len(spec.blocks) == len(spec.rules)
    assert check_class(spec, 1, 0, spec.max_exponent())
    assert recip_block.hartogs.kind == Verdict.DIVERGES
    assert SeriesSpec.from_dict(spec.to_dict()) == spec


def test_block_degenerate_union_agrees_with_variety():
    probes = [(1,), (0,), (0.5 + 0.5j,), (-1.2,)]
    block = synth_block([s - 1], m_max=4, probes=probes, seed=3)
    var = synth_variety(s - 1, probes=probes)
    assert [p.verdict.kind for p in block.probes] == [p.verdict.kind for p in var.probes]


# projective synthesizer

def test_projective_examples(line_projective):
    kinds = [p.verdict.kind for p in line_projective.probes]
    assert kinds[0] == Verdict.CONVERGES
    assert kinds[1] == Verdict.DIVERGES
    assert kinds[1] == kinds[2]
    assert line_projective.spec.projective
    for q, rule, k in line_projective.spec.terms(line_projective.spec.max_exponent()):
        assert rule.polynomial(k).is_homogeneous(q)
    assert line_projective.certified_window["avoiding_hyperplanes"]


def test_projective_needs_homogeneous_target():
    with pytest.raises(ValueError):
        synth_projective([x + 1])


def test_projective_witness_clauses(line_projective):
    rng = np.random.Generator(np.random.Philox(key=99))
    G = rng.normal(size=(2000, 2)) + 1j * rng.normal(size=(2000, 2))
    for w in line_projective.witnesses:
        res = w.check(np.array([[0, 1]]), G, tol=1e-6)
        assert all(ok for ok, _ in res.values()), res


# enumeration synthesizer

def test_enumeration_examples():
    rep = synth_enumeration(Region.finite([[0]], 1), levels=10, probes=[(Fraction(0),), (Fraction(1),)])
    assert [p.verdict.kind for p in rep.probes] == [Verdict.CONVERGES, Verdict.DIVERGES]
    rep2 = synth_enumeration(Region.finite([[0], [1]], 1), levels=10, probes=[(Fraction(1, 2),)])
    assert rep2.probes[0].verdict.kind == Verdict.DIVERGES


@given(st.integers(0, 1000))
def test_enumeration_exponents_strictly_increase(seed):
    rep = synth_enumeration(Region.finite([[0], [Fraction(1, 2)]], 1), levels=8, per_level=12, seed=seed)
    qs = [r.exponent.b for r in rep.spec.rules]
    assert all(a < b for a, b in zip(qs, qs[1:]))
    assert rep.class_ok


def test_enumeration_members_bounded_on_K():
    K = Region.finite([[0], [1], [Fraction(-1, 2)]], 1)
    rep = synth_enumeration(K, levels=8, per_level=16)
    for rule in rep.spec.rules:
        for pt in K.points:
            assert abs(rule.base.evaluate([Fraction(pt[0])])) <= 1


# verification

def test_verify_examples():
    spec = synth_variety(x * y).spec
    rep = verify(spec, Region.variety(x * y), [(0, 5), (1, 1)])
    a, b = rep.probes
    assert a.verdict.kind == Verdict.CONVERGES and a.detail["E_m"] == 5
    assert b.verdict.kind == Verdict.DIVERGES and b.detail["E_m"] is None
    geo = SeriesSpec(1, (TermRule(s, k_start=1),))
    r7 = verify(geo, Region.ball([0], 10), [(7,)]).probes[0]
    assert r7.detail["E_m"] == 7


def test_verify_agrees_with_block_synthesis(recip_block):
    probes = [p.point for p in recip_block.probes]
    rep = verify(recip_block.spec, recip_target, probes)
    assert rep.notes["consistent"]
    for a, b in zip(rep.probes, recip_block.probes):
        assert {a.verdict.kind, b.verdict.kind} != {Verdict.CONVERGES, Verdict.DIVERGES}


def test_enumeration_needs_enough_levels():
    with pytest.raises(ValueError):
        synth_enumeration(Region.finite([[0]], 1), levels=4)


def test_reprobe_reproduces_synthesis_verdicts(recip_block):
    again = recip_block.probe([p.point for p in recip_block.probes])
    assert [p.verdict.kind for p in again] == [p.verdict.kind for p in recip_block.probes]
    rep = verify(synth_variety(x * y).spec, Region.variety(x * y), [(0, 1)])
    with pytest.raises(ValueError):
        rep.probe([(1, 1)])
