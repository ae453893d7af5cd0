import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urysohn.errors import NonFiniteValueError, PreconditionError, UnsupportedRuleError
from urysohn.mesh import UniformPartition, composite_rule, gauss_legendre_rule, integrate


def test_partition_fields():
    part = UniformPartition(4, 3)
    assert part.m == 12
    assert part.h == pytest.approx(3 * part.h_fine, abs=1e-16)
    tj, si = part.breakpoints, part.fine_breakpoints
    assert np.array_equal(tj, si[:: part.p])
    assert tj[0] == 0.0 and tj[-1] == 1.0
    assert np.all(np.diff(si) > 0)


@pytest.mark.parametrize("n, p", [(0, 1), (2, 0), (1.5, 1)])
def test_partition_rejects_bad_counts(n, p):
    with pytest.raises(PreconditionError):
        UniformPartition(n, p)


def test_partition_from_counts():
    assert UniformPartition.from_counts(4, 16) == UniformPartition(4, 4)
    with pytest.raises(PreconditionError):
        UniformPartition.from_counts(4, 10)


def test_midpoint_rule():
    rule = gauss_legendre_rule(1)
    assert rule.nodes.tolist() == [0.5]
    assert rule.weights.tolist() == [1.0]


def test_two_point_rule():
    rule = gauss_legendre_rule(2)
    offset = 1 / (2 * math.sqrt(3))
    np.testing.assert_allclose(rule.nodes, [0.5 - offset, 0.5 + offset], rtol=0, atol=1e-15)
    np.testing.assert_allclose(rule.weights, [0.5, 0.5], rtol=0, atol=1e-15)
    np.testing.assert_allclose(rule.nodes, [0.21132486, 0.78867513], atol=1e-8)


def test_three_point_rule_closed_form():
    rule = gauss_legendre_rule(3)
    d = math.sqrt(15) / 10
    np.testing.assert_allclose(rule.nodes, [0.5 - d, 0.5, 0.5 + d], rtol=0, atol=1e-15)
    np.testing.assert_allclose(rule.weights, [5 / 18, 8 / 18, 5 / 18], rtol=0, atol=1e-15)


@pytest.mark.parametrize("rho", range(1, 11))
def test_matches_eigenvalue_gauss_rule(rho):
    # numpy computes the rule by Golub-Welsch, independently of our Newton iteration
    x, w = np.polynomial.legendre.leggauss(rho)
    rule = gauss_legendre_rule(rho)
    np.testing.assert_allclose(rule.nodes, (x + 1) / 2, rtol=0, atol=1e-14)
    np.testing.assert_allclose(rule.weights, w / 2, rtol=0, atol=1e-14)
    assert abs(rule.weights.sum() - 1.0) <= 1e-15
    assert np.all(rule.weights > 0)
    assert np.all(np.diff(rule.nodes) > 0)


@pytest.mark.parametrize("rho", [0, 11, -1, 2.0])
def test_unsupported_rule(rho):
    with pytest.raises(UnsupportedRuleError):
        gauss_legendre_rule(rho)


@pytest.mark.parametrize("rho", range(1, 11))
def test_monomial_exactness(rho):
    rule = composite_rule(gauss_legendre_rule(rho), UniformPartition(1, 1))
    for k in range(2 * rho):
        assert abs(integrate(rule, lambda t: t**k) - 1 / (k + 1)) <= 1e-13


def test_composite_single_panel_is_basic_rule():
    basic = gauss_legendre_rule(2)
    rule = composite_rule(basic, UniformPartition(1, 1))
    assert np.array_equal(rule.nodes, basic.nodes)
    assert np.array_equal(rule.weights, basic.weights)


def test_composite_two_panels():
    rule = composite_rule(gauss_legendre_rule(2), UniformPartition(2, 1))
    assert rule.size == 4
    assert rule.nodes[0] == pytest.approx(0.10566243270259357, abs=1e-15)
    np.testing.assert_allclose(rule.weights, 0.25)


@settings(max_examples=40, deadline=None)
@given(rho=st.integers(1, 10), n=st.integers(1, 12), p=st.integers(1, 6))
def test_composite_invariants(rho, n, p):
    part = UniformPartition(n, p)
    rule = composite_rule(gauss_legendre_rule(rho), part)
    assert rule.size == part.m * rho
    assert abs(rule.weights.sum() - 1.0) <= 1e-13
    assert np.all((rule.nodes > 0) & (rule.nodes < 1))
    assert np.all(np.diff(rule.nodes) > 0)
    j = rule.interval_of_node()
    tj = part.breakpoints
    assert np.all((rule.nodes > tj[j]) & (rule.nodes <= tj[j + 1]))


def test_integrate_cubic_and_constant():
    rule = composite_rule(gauss_legendre_rule(2), UniformPartition(1, 1))
    assert abs(integrate(rule, lambda t: t**3) - 0.25) <= 1e-15
    for rho in (1, 4, 7):
        rule = composite_rule(gauss_legendre_rule(rho), UniformPartition(3, 2))
        assert integrate(rule, lambda t: np.ones_like(t)) == pytest.approx(1.0, abs=1e-14)


def test_integrate_exp_fourth_order():
    errs = []
    for m in (4, 8, 16):
        rule = composite_rule(gauss_legendre_rule(2), UniformPartition(1, m))
        errs.append(abs(integrate(rule, np.exp) - (math.e - 1)))
    slopes = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all(np.abs(slopes - 4.0) <= 0.1)


@settings(max_examples=30, deadline=None)
@given(
    a=st.floats(-5, 5), b=st.floats(-5, 5),
    cf=st.lists(st.floats(-3, 3), min_size=1, max_size=6),
    cg=st.lists(st.floats(-3, 3), min_size=1, max_size=6),
)
def test_integrate_linear(a, b, cf, cg):
    rule = composite_rule(gauss_legendre_rule(3), UniformPartition(2, 3))
    f = np.polynomial.Polynomial(cf)
    g = np.polynomial.Polynomial(cg)
    lhs = integrate(rule, lambda t: a * f(t) + b * g(t))
    rhs = a * integrate(rule, f) + b * integrate(rule, g)
    assert abs(lhs - rhs) <= 1e-13


def test_integrate_non_finite():
    rule = composite_rule(gauss_legendre_rule(2), UniformPartition(1, 2))
    with pytest.raises(NonFiniteValueError) as info:
        integrate(rule, lambda t: np.where(t > 0.7, np.nan, t))
    assert info.value.index == 3
