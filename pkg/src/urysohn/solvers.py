"""Newton's method and the discrete projection solvers.

All projection-type solvers work with ``n (r + 1)`` unknowns, the
coefficients of a piecewise polynomial, no matter how fine the quadrature
mesh is.  Functions are carried between the coarse space and the
quadrature nodes through two linear maps:

* ``expand``:  coefficients -> node values (the basis matrix ``Phi``),
* ``project``: node values -> coefficients (the discrete projection).
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DivergenceError, PreconditionError, SingularJacobianError
from .mesh import composite_rule, gauss_legendre_rule
from .operator import NystromOperator
from .space import (
    GridFunction,
    PiecewisePolynomial,
    basis_matrix,
    expand_coefficients,
    project_values,
    sample_to_grid,
)

METHODS = ("nystrom", "galerkin", "iterated_galerkin", "modified", "iterated_modified")


@dataclass(frozen=True)
class NewtonConfig:
    """Stopping rule and starting point for Newton's method.

    ``initial_guess`` is ``"rhs"`` (start from the right-hand side, or its
    projection) or ``"zero"``.
    """

    tol: float = 1e-12
    max_iter: int = 50
    initial_guess: str = "rhs"

    def __post_init__(self):
        if not self.tol > 0:
            raise PreconditionError(f"tolerance must be positive, got {self.tol!r}")
        if self.max_iter < 1:
            raise PreconditionError(f"max_iter must be at least 1, got {self.max_iter!r}")
        if self.initial_guess not in ("rhs", "zero"):
            raise PreconditionError(f"unknown initial guess policy {self.initial_guess!r}")


@dataclass
class NewtonResult:
    x: np.ndarray
    iterations: int
    residual: float
    condition: Optional[float] = None


def newton_solve(F, J, x0, cfg=NewtonConfig()):
    """Solve ``F(x) = 0`` by Newton's method with dense LU solves.

    Iteration stops as soon as the sup-norm of ``F(x)`` is at most
    ``cfg.tol``; ``iterations`` counts the Newton steps taken.  ``J`` is
    always called at the point ``F`` was last evaluated at.

    Raises
    ------
    SingularJacobianError
        If a Jacobian cannot be factored or yields a non-finite step.
    DivergenceError
        If the tolerance is not met within ``cfg.max_iter`` steps.
    """
    x = np.array(x0, dtype=float, ndmin=1)
    condition = None
    residual = np.inf
    for k in range(cfg.max_iter + 1):
        fx = np.atleast_1d(np.asarray(F(x), dtype=float))
        residual = float(np.max(np.abs(fx)))
        if residual <= cfg.tol:
            return NewtonResult(x, k, residual, condition)
        if not np.isfinite(residual) or k == cfg.max_iter:
            break
        jac = np.asarray(J(x), dtype=float).reshape(len(x), len(x))
        try:
            step = np.linalg.solve(jac, fx)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobianError(f"singular Jacobian at iteration {k}: {exc}", k) from exc
        if not np.all(np.isfinite(step)):
            raise SingularJacobianError(f"non-finite Newton step at iteration {k}", k)
        condition = float(np.linalg.cond(jac))
        x = x - step
    raise DivergenceError(
        f"Newton did not converge in {cfg.max_iter} iterations (residual {residual:.3e})",
        residual,
        cfg.max_iter,
    )


@dataclass(eq=False)
class Solution:
    """Approximate solution returned by every solver.

    ``grid`` holds values at the quadrature nodes, ``poly`` the coarse
    piecewise polynomial where one is part of the method, and calling the
    solution evaluates it at arbitrary points of [0, 1].
    """

    method: str
    grid: GridFunction
    evaluator: Callable = field(repr=False)
    iterations: int
    residual: float
    poly: Optional[PiecewisePolynomial] = field(default=None, repr=False)
    condition: Optional[float] = None

    @property
    def rule(self):
        return self.grid.rule

    def __call__(self, s):
        return self.evaluator(s)


class _Discretisation:
    """Quadrature rule, Nystrom operator and projection data for one mesh."""

    def __init__(self, problem, partition, r, rho):
        if rho < r + 1:
            raise PreconditionError(f"need rho >= r + 1 for exact projection, got rho={rho}, r={r}")
        self.problem = problem
        self.r = r
        self.rule = composite_rule(gauss_legendre_rule(rho), partition)
        self.op = NystromOperator(problem.kernel, self.rule)
        self.nodes = self.rule.nodes
        self.f = sample_to_grid(problem.rhs, self.rule).values
        self.phi = basis_matrix(self.rule, r)
        self.dim = self.phi.shape[1]

    def project(self, values):
        values = np.asarray(values)
        return project_values(values, self.rule, self.r).reshape((self.dim,) + values.shape[1:])

    def expand(self, coeffs):
        coeffs = np.asarray(coeffs)
        shaped = coeffs.reshape((self.rule.partition.n, self.r + 1) + coeffs.shape[1:])
        return expand_coefficients(shaped, self.rule)

    def poly(self, coeffs):
        return PiecewisePolynomial(self.rule.partition, self.r, coeffs)

    def rhs(self, s):
        return np.asarray(self.problem.rhs(s), dtype=float)

    def start(self, cfg, size_like):
        if cfg.initial_guess == "zero":
            return np.zeros_like(size_like)
        return size_like.copy()


def solve_nystrom(problem, rule, cfg=NewtonConfig()):
    """Solve the quadrature-discretised equation at all nodes of ``rule``.

    Off-node values come from the natural interpolant ``f + K_m(x)``.
    """
    op = NystromOperator(problem.kernel, rule)
    nodes = rule.nodes
    f = sample_to_grid(problem.rhs, rule).values
    eye = np.eye(rule.size)
    x0 = f.copy() if cfg.initial_guess == "rhs" else np.zeros_like(f)
    result = newton_solve(
        lambda x: x - op.apply(x, nodes) - f,
        lambda x: eye - op.derivative_matrix(x, nodes),
        x0,
        cfg,
    )
    x = result.x

    def evaluate(s):
        return np.asarray(problem.rhs(s), dtype=float) + op.apply(x, s)

    return Solution(
        "nystrom", GridFunction(rule, x), evaluate, result.iterations, result.residual,
        condition=result.condition,
    )


def solve_discrete_galerkin(problem, partition, r, rho, cfg=NewtonConfig()):
    """Discrete Galerkin solution ``z = Q_n K_m(z) + Q_n f`` in the coarse space."""
    d = _Discretisation(problem, partition, r, rho)
    pf = d.project(d.f)
    eye = np.eye(d.dim)

    def residual(c):
        return c - d.project(d.op.apply(d.expand(c), d.nodes)) - pf

    def jacobian(c):
        return eye - d.project(d.op.derivative_product(d.expand(c), d.nodes, d.phi))

    result = newton_solve(residual, jacobian, d.start(cfg, pf), cfg)
    poly = d.poly(result.x)
    return Solution(
        "galerkin", GridFunction(d.rule, d.expand(result.x)), poly, result.iterations,
        result.residual, poly=poly, condition=result.condition,
    )


def solve_iterated_galerkin(problem, partition, r, rho, cfg=NewtonConfig(), galerkin=None):
    """Iterated Galerkin solution ``f + K_m(z_G)``.

    A previously computed Galerkin solution on the same mesh can be passed
    as ``galerkin`` to skip the nonlinear solve.
    """
    if galerkin is None:
        galerkin = solve_discrete_galerkin(problem, partition, r, rho, cfg)
    rule = galerkin.rule
    op = NystromOperator(problem.kernel, rule)
    zg = galerkin.grid.values
    values = sample_to_grid(problem.rhs, rule).values + op.apply(zg, rule.nodes)

    def evaluate(s):
        return np.asarray(problem.rhs(s), dtype=float) + op.apply(zg, s)

    return Solution(
        "iterated_galerkin", GridFunction(rule, values), evaluate, galerkin.iterations,
        galerkin.residual, poly=galerkin.poly, condition=galerkin.condition,
    )


def solve_modified_projection(problem, partition, r, rho, cfg=NewtonConfig()):
    """Discrete modified projection solution.

    Applying the projection to the defining equation shows that
    ``Q_n z = Q_n f + v`` with ``v = Q_n K_m(z)``, and then

        z = f + v + K_m(w) - Q_n K_m(w),     w = Q_n f + v.

    Only ``v`` is solved for, so the nonlinear system keeps ``n (r + 1)``
    unknowns; its Jacobian follows from the chain rule through ``K_m'``.
    """
    d = _Discretisation(problem, partition, r, rho)
    pf = d.project(d.f)
    eye = np.eye(d.dim)
    cache = {}

    def pieces(v):
        key = v.tobytes()
        if key not in cache:
            cache.clear()
            w = d.expand(pf + v)
            kw = d.op.apply(w, d.nodes)
            pkw = d.project(kw)
            z = d.f + d.expand(v) + kw - d.expand(pkw)
            cache[key] = (w, kw, pkw, z)
        return cache[key]

    def residual(v):
        z = pieces(v)[3]
        return v - d.project(d.op.apply(z, d.nodes))

    def jacobian(v):
        w, _, _, z = pieces(v)
        kw_dir = d.op.derivative_product(w, d.nodes, d.phi)
        dz = d.phi + kw_dir - d.expand(d.project(kw_dir))
        return eye - d.project(d.op.derivative_product(z, d.nodes, dz))

    # v = 0 starts the coarse component Q_n z at Q_n f; v = -Q_n f starts it at 0
    start = np.zeros_like(pf) if cfg.initial_guess == "rhs" else -pf
    result = newton_solve(residual, jacobian, start, cfg)
    v = result.x
    w, _, pkw, z = pieces(v)
    v_poly, pkw_poly = d.poly(v), d.poly(pkw)

    def evaluate(s):
        return d.rhs(s) + v_poly(s) + d.op.apply(w, s) - pkw_poly(s)

    return Solution(
        "modified", GridFunction(d.rule, z), evaluate, result.iterations, result.residual,
        poly=d.poly(pf + v), condition=result.condition,
    )


def solve_iterated_modified(problem, partition, r, rho, cfg=NewtonConfig(), modified=None):
    """Iterated modified projection solution ``f + K_m(z_M)``."""
    if modified is None:
        modified = solve_modified_projection(problem, partition, r, rho, cfg)
    rule = modified.rule
    op = NystromOperator(problem.kernel, rule)
    zm = modified.grid.values
    values = sample_to_grid(problem.rhs, rule).values + op.apply(zm, rule.nodes)

    def evaluate(s):
        return np.asarray(problem.rhs(s), dtype=float) + op.apply(zm, s)

    return Solution(
        "iterated_modified", GridFunction(rule, values), evaluate, modified.iterations,
        modified.residual, condition=modified.condition,
    )
