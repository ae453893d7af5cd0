import numpy as np
import pytest

from urysohn.errors import PreconditionError
from urysohn.mesh import UniformPartition, composite_rule, gauss_legendre_rule, integrate
from urysohn.problems import (
    atkinson_potra_forcing,
    atkinson_potra_problem,
    exact_residual,
    get_problem,
    green_kernel,
    linear_test_problem,
    reference_integral,
)
from urysohn.solvers import (
    solve_discrete_galerkin,
    solve_iterated_galerkin,
    solve_iterated_modified,
    solve_modified_projection,
    solve_nystrom,
)

BENCH = atkinson_potra_problem()


def test_benchmark_boundary_values():
    assert BENCH.exact(0.0) == 0.0 and BENCH.exact(1.0) == 0.0
    assert abs(BENCH.rhs(0.0)) <= 1e-16 and abs(BENCH.rhs(1.0)) <= 1e-15


def test_forcing_values_and_derivation():
    assert atkinson_potra_forcing(0.0) == pytest.approx(3.0, abs=1e-15)
    assert atkinson_potra_forcing(1.0) == pytest.approx(0.0, abs=1e-15)
    # forcing = -phi'' - 1/(1 + t + phi), checked by second differences of phi
    t = np.linspace(0.05, 0.95, 19)
    h = 1e-4
    phi = BENCH.exact
    second = (phi(t + h) - 2 * phi(t) + phi(t - h)) / h**2
    np.testing.assert_allclose(-second - 1 / (1 + t + phi(t)), atkinson_potra_forcing(t), atol=1e-6)


def test_rhs_solves_boundary_value_problem():
    # rhs = int green(s, t) z(t) dt  <=>  -rhs'' = z with zero boundary values
    s = np.linspace(0.05, 0.95, 19)
    h = 1e-4
    g = BENCH.rhs
    second = (g(s + h) - 2 * g(s) + g(s - h)) / h**2
    np.testing.assert_allclose(-second, atkinson_potra_forcing(s), atol=1e-6)


@pytest.mark.parametrize("s", [0.5, 0.1, 0.73])
def test_rhs_matches_reference_quadrature(s):
    ref = reference_integral(lambda t: green_kernel(s, t) * atkinson_potra_forcing(t), s)
    assert abs(BENCH.rhs(s) - ref) <= 1e-13


def test_closed_form_green_integral_of_nonlinearity():
    for s in np.linspace(0, 1, 9):
        direct = reference_integral(lambda t: green_kernel(s, t) * (1 + t) / (1 + 3 * t), s)
        assert abs((BENCH.exact(s) - BENCH.rhs(s)) - direct) <= 1e-13


@pytest.mark.parametrize("problem", [atkinson_potra_problem(), linear_test_problem(3.0)])
def test_exact_residual_small(problem):
    assert np.abs(exact_residual(problem, np.linspace(0, 1, 33))).max() <= 1e-10


def test_reference_integral_examples():
    assert reference_integral(lambda t: green_kernel(0.5, t), 0.5) == pytest.approx(0.125, abs=1e-15)
    assert reference_integral(lambda t: np.ones_like(t), 0.3) == pytest.approx(1.0, abs=1e-14)
    assert reference_integral(lambda t: np.ones_like(t), 0.0) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("s", [0.3, 0.123456, 0.5, 0.77])
def test_reference_integral_agrees_with_fine_composite(s):
    rule = composite_rule(gauss_legendre_rule(2), UniformPartition(1, 4096))
    integrand = lambda t: BENCH.kernel.value(s, t, BENCH.exact(t))
    assert abs(reference_integral(integrand, s) - integrate(rule, integrand)) <= 1e-9


def test_green_integral_of_sine():
    for s in np.linspace(0, 1, 7):
        val = reference_integral(lambda t: green_kernel(s, t) * np.sin(np.pi * t), s)
        assert val == pytest.approx(np.sin(np.pi * s) / np.pi**2, abs=1e-14)


def test_linear_problem_zero_coupling():
    prob = linear_test_problem(0.0)
    t = np.linspace(0, 1, 11)
    np.testing.assert_allclose(prob.rhs(t), prob.exact(t))


@pytest.mark.parametrize("lam", [np.pi**2, 4 * np.pi**2, 9 * np.pi**2])
def test_linear_problem_rejects_eigenvalues(lam):
    with pytest.raises(PreconditionError):
        linear_test_problem(lam)


def test_linear_problem_one_newton_step():
    prob = linear_test_problem(2.5)
    part = UniformPartition(4, 2)
    rule = composite_rule(gauss_legendre_rule(2), part)
    assert solve_nystrom(prob, rule).iterations == 1
    for r in (0, 1):
        g = solve_discrete_galerkin(prob, part, r, 2)
        m = solve_modified_projection(prob, part, r, 2)
        assert g.iterations == 1 and m.iterations == 1
        assert solve_iterated_galerkin(prob, part, r, 2, galerkin=g).iterations == 1
        assert solve_iterated_modified(prob, part, r, 2, modified=m).iterations == 1


def test_benchmark_kernel_derivative_formulas():
    s, t, u = 0.3, 0.6, 0.2
    g = green_kernel(s, t)
    assert BENCH.kernel.du(s, t, u) == pytest.approx(-g / (1 + t + u) ** 2)
    assert BENCH.kernel.duu(s, t, u) == pytest.approx(2 * g / (1 + t + u) ** 3)
    lower, upper = BENCH.kernel.lower, BENCH.kernel.upper
    assert lower(0.7, 0.2, u) == pytest.approx(BENCH.kernel.value(0.7, 0.2, u))
    assert upper(0.2, 0.7, u) == pytest.approx(BENCH.kernel.value(0.2, 0.7, u))


def test_problem_registry():
    assert get_problem("atkinson-potra").name == "atkinson-potra"
    with pytest.raises(PreconditionError):
        get_problem("nope")
