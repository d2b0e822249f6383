"""Weighted quadrature: Gauss-Jacobi rules, adaptive Lp norms, singular rules."""

import math

import numpy as np
import pytest

from heckop import quadrature as qd
from heckop.errors import ConvergenceError, EvaluationError, IntegrabilityError
from heckop.exppoly import weight_fourier_moment


@pytest.mark.parametrize("k", [0.0, 0.5, 1.0, 2.5])
def test_rule_reproduces_weight_moments(k):
    rule = qd.build_rule(k, 24)
    for m in range(0, 21):
        want = weight_fourier_moment(m, k)
        got = qd.integrate(lambda x, _m=m: np.cos(_m * x), rule)
        scale = abs(want) + abs(weight_fourier_moment(0, k))
        assert abs(got - want) < 1e-12 * scale, m
    # odd integrands die by symmetry of the rule
    assert abs(qd.integrate(np.sin, rule)) < 1e-15


def test_rule_structure():
    for k in (0.0, 0.5, 1.0, 2.5):
        rule = qd.build_rule(k, 16)
        assert rule.exact_degree == 31
        assert len(rule.nodes) == 32
        assert np.all(rule.weights > 0)
        assert np.all(np.abs(rule.nodes) < math.pi)
        assert np.all(rule.nodes != 0.0)
        # mirrored half rules
        assert np.allclose(np.sort(-rule.nodes), rule.nodes, atol=0)
    assert qd.build_rule(1.0, 8) is qd.build_rule(1.0, 8)


def test_integrate_complex_and_scalar_fallback():
    rule = qd.build_rule(1.0, 12)
    z = qd.integrate(lambda x: np.exp(2j * x), rule)
    assert abs(z - weight_fourier_moment(2, 1.0)) < 1e-13
    # math.exp chokes on arrays, forcing the scalar path
    v = qd.integrate(lambda x: math.exp(math.cos(x)), rule)
    w = qd.integrate(lambda x: np.exp(np.cos(x)), rule)
    assert abs(v - w) < 1e-14


def test_nonfinite_value_is_reported():
    rule = qd.build_rule(0.5, 8)
    with pytest.raises(EvaluationError) as exc:
        qd.integrate(lambda x: np.where(np.abs(x) < 1.0, np.inf, 1.0), rule)
    assert "node" in str(exc.value)


def test_lp_norm_frozen_values():
    # ||sin||_{L^4(dm_0)} = (3 pi / 4)^{1/4}
    got = qd.lp_norm(np.sin, 4.0, 0.0)
    assert abs(got - 1.2389471586471041) < 1e-12
    # ||1||_{L^p(dm_1)} = pi^{1/p}
    got = qd.lp_norm(lambda x: np.ones_like(x), 3.0, 1.0)
    assert abs(got - math.pi ** (1.0 / 3.0)) < 1e-12


def test_lp_norm_of_complex_function():
    # |e^{ix}| = 1 so any p gives the weight mass
    got = qd.lp_norm(lambda x: np.exp(1j * x), 2.0, 1.0)
    assert abs(got - math.sqrt(math.pi)) < 1e-12


def test_refine_policy_cap():
    policy = qd.RefinePolicy(m_start=4, rel_tol=1e-15, m_cap=8)
    f = lambda x: np.abs(np.sin(40 * x)) ** 1.3
    with pytest.raises(ConvergenceError) as exc:
        qd.lp_norm(f, 1.7, 1.0, policy)
    est = exc.value.estimates
    assert len(est) == 2 and all(math.isfinite(v) for v in est)
    ret = qd.lp_norm(f, 1.7, 1.0,
                     qd.RefinePolicy(m_start=4, rel_tol=1e-15, m_cap=8,
                                     on_cap="return"))
    assert ret == pytest.approx(est[1])


def test_singular_rule_frozen_integrals():
    # int_0^pi (1 - cos x)^{-3/2} sin^4 x dx: under t = cos x the integrand
    # collapses to (1+t)^{3/2}, so the value is 8 sqrt(2) / 5
    srule = qd.build_singular_rule(2.0, 1.0, 40)
    got = qd.integrate_singular(lambda x: np.ones_like(x), srule)
    assert abs(got - 8 * math.sqrt(2) / 5) < 1e-12 * got
    assert srule.sigma == -1.5
    assert np.all(srule.nodes > 0) and np.all(srule.nodes < math.pi)
    # with g = 1 + cos x the collapse is (1+t)^{5/2}: integral 2^{9/2}/7
    got = qd.integrate_singular(lambda x: 1.0 + np.cos(x), srule)
    assert abs(got - 2.0 ** 4.5 / 7) < 1e-12 * got


def test_singular_rule_matches_plain_rule():
    # choose g so the singular factor cancels and both routes see an
    # analytic integrand
    k, p = 1.0, 1.0
    srule = qd.build_singular_rule(k, p, 60)
    rule = qd.build_rule(k, 64)
    g = lambda x: (1.0 - np.cos(x)) * (2.0 + np.cos(x)) ** 1.5
    via = qd.integrate_singular(g, srule)
    direct = 0.5 * qd.integrate(lambda x: (2.0 + np.cos(x)) ** 1.5, rule)
    assert abs(via - direct) < 1e-12 * abs(via)


def test_singular_rule_rejects_nonintegrable():
    with pytest.raises(IntegrabilityError) as exc:
        qd.build_singular_rule(1.0, 1.5, 32)
    assert "L^p" in str(exc.value)
    # k = 0 coefficient rule is already out of range at p = 1
    with pytest.raises(IntegrabilityError):
        qd.build_singular_rule(0.0, 1.0, 32)


def test_singular_symmetric_doubles_even_part():
    srule = qd.build_singular_rule(1.0, 1.0, 24)
    h = lambda x: np.cos(x) + 2.0
    a = qd.integrate_singular_symmetric(h, srule)
    b = 2.0 * qd.integrate_singular(h, srule)
    assert abs(a - b) < 1e-13 * abs(b)
    # odd part cancels
    h2 = lambda x: np.sin(x) + np.cos(x)
    c = qd.integrate_singular_symmetric(h2, srule)
    d = 2.0 * qd.integrate_singular(np.cos, srule)
    assert abs(c - d) < 1e-13 * abs(d)
