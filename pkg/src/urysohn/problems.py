"""Benchmark Urysohn problems with known solutions."""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import PreconditionError
from .mesh import gauss_legendre_rule
from .operator import KernelTriple

REFERENCE_POINTS = 10
REFERENCE_PANELS = 64


@dataclass(frozen=True)
class UrysohnProblem:
    """Equation ``x(s) - int_0^1 k(s, t, x(t)) dt = f(s)`` on [0, 1]."""

    kernel: KernelTriple
    rhs: Callable
    exact: Optional[Callable] = None
    name: str = ""


def green_kernel(s, t):
    """Green's function of ``-d^2/dt^2`` with zero boundary values."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    return np.where(t <= s, (1.0 - s) * t, s * (1.0 - t))


def _panel_rule(a, b):
    rule = gauss_legendre_rule(REFERENCE_POINTS)
    width = (b - a) / REFERENCE_PANELS
    starts = a + np.arange(REFERENCE_PANELS) * width
    nodes = (starts[:, None] + rule.nodes * width).ravel()
    return nodes, np.tile(rule.weights * width, REFERENCE_PANELS)


def reference_integral(integrand, s):
    """Integrate ``integrand(t)`` over [0, 1] with a split at ``t = s``.

    Each of ``[0, s]`` and ``[s, 1]`` gets a 64-panel composite 10-point
    Gauss rule, so integrands that are smooth on both sides of ``s`` are
    integrated to near machine precision.
    """
    total = 0.0
    for a, b in ((0.0, s), (s, 1.0)):
        if b > a:
            nodes, weights = _panel_rule(a, b)
            total += float(weights @ np.asarray(integrand(nodes), dtype=float))
    return total


def exact_residual(problem, s):
    """``phi(s) - int k(s, t, phi(t)) dt - f(s)`` using the reference integrator."""
    if problem.exact is None:
        raise PreconditionError(f"problem {problem.name!r} has no exact solution")
    phi = problem.exact
    kernel = problem.kernel.value
    out = [
        phi(si) - reference_integral(lambda t: kernel(si, t, phi(t)), si) - problem.rhs(si)
        for si in np.atleast_1d(s)
    ]
    return np.array(out)


def _ap_solution(t):
    t = np.asarray(t, dtype=float)
    return t * (1.0 - t) / (1.0 + t)


def _ap_particular(t):
    # -U'' = 1/3 + (2/3)/(1 + 3t)
    return -t * t / 6.0 - 2.0 / 27.0 * (1.0 + 3.0 * t) * np.log1p(3.0 * t)


def _ap_rhs(s):
    s = np.asarray(s, dtype=float)
    green_of_nonlinearity = _ap_particular(s) - s * _ap_particular(1.0)
    return _ap_solution(s) - green_of_nonlinearity


def atkinson_potra_forcing(t):
    """Forcing ``z`` with ``f(s) = int green(s, t) z(t) dt`` for the benchmark."""
    t = np.asarray(t, dtype=float)
    return 4.0 / (1.0 + t) ** 3 - (1.0 + t) / (1.0 + 3.0 * t)


def atkinson_potra_problem():
    """Hammerstein benchmark ``k(s, t, u) = green(s, t) / (1 + t + u)``.

    The exact solution is ``t (1 - t) / (1 + t)``.  Along it the
    nonlinearity equals ``(1 + t) / (1 + 3t)``, whose Green's integral has a
    closed form with a logarithmic term; that gives the right-hand side.
    """
    kernel = KernelTriple(
        value=lambda s, t, u: green_kernel(s, t) / (1.0 + t + u),
        du=lambda s, t, u: -green_kernel(s, t) / (1.0 + t + u) ** 2,
        duu=lambda s, t, u: 2.0 * green_kernel(s, t) / (1.0 + t + u) ** 3,
        lower=lambda s, t, u: (1.0 - s) * t / (1.0 + t + u),
        upper=lambda s, t, u: s * (1.0 - t) / (1.0 + t + u),
    )
    return UrysohnProblem(kernel, _ap_rhs, _ap_solution, "atkinson-potra")


def linear_test_problem(lam):
    """Linear problem ``k = lam green(s, t) u`` with solution ``sin(pi t)``.

    Raises
    ------
    PreconditionError
        If ``lam`` equals ``k^2 pi^2`` for some integer ``k``, i.e. 1 is an
        eigenvalue of ``lam`` times the Green's operator.
    """
    if lam > 0:
        k = max(1, round(np.sqrt(lam) / np.pi))
        if abs(lam - (k * np.pi) ** 2) <= 1e-9 * lam:
            raise PreconditionError(f"lam={lam} makes 1 an eigenvalue of the operator")
    lam = float(lam)
    kernel = KernelTriple(
        value=lambda s, t, u: lam * green_kernel(s, t) * u,
        du=lambda s, t, u: lam * green_kernel(s, t) * np.ones_like(u),
        duu=lambda s, t, u: np.zeros(np.broadcast(s, t, u).shape),
    )
    factor = 1.0 - lam / np.pi**2
    return UrysohnProblem(
        kernel,
        lambda s: factor * np.sin(np.pi * np.asarray(s, dtype=float)),
        lambda t: np.sin(np.pi * np.asarray(t, dtype=float)),
        f"linear-sine(lam={lam:g})",
    )


PROBLEMS = {
    "atkinson-potra": atkinson_potra_problem,
    "linear-sine": lambda: linear_test_problem(1.0),
}


def get_problem(name):
    try:
        return PROBLEMS[name]()
    except KeyError:
        raise PreconditionError(
            f"unknown problem {name!r}; choose from {', '.join(sorted(PROBLEMS))}"
        ) from None
