"""Piecewise polynomials on the coarse partition and the discrete projection.

On each coarse interval ``(t_{j-1}, t_j]`` the basis functions are

    phi_{j,eta}(t) = sqrt((2 eta + 1) / h) P_eta((2t - t_j - t_{j-1}) / h),

with ``P_eta`` the classical Legendre polynomials, so that the family is
orthonormal in L2(0, 1) and, whenever the quadrature integrates degree
``2r`` exactly, also under the discrete inner product built from the
composite rule.  Intervals are half open on the left; ``t = 0`` belongs to
the first interval.
"""
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre

from .errors import DomainError, NonFiniteValueError, PreconditionError, ShapeError


@dataclass(frozen=True)
class LegendreBasis:
    """Legendre polynomials of degree ``0..r`` orthonormal on [-1, 1]."""

    r: int

    def __post_init__(self):
        if not isinstance(self.r, (int, np.integer)) or self.r < 0:
            raise PreconditionError(f"degree must be a nonnegative integer, got {self.r!r}")

    def __call__(self, y):
        """Values at the points ``y``, shape ``(len(y), r + 1)``."""
        y = np.asarray(y, dtype=float)
        scale = np.sqrt((2 * np.arange(self.r + 1) + 1) / 2.0)
        return legendre.legvander(y, self.r) * scale


@dataclass(frozen=True, eq=False)
class PiecewisePolynomial:
    """Element of the space of piecewise polynomials of degree <= r.

    ``coeffs[j, eta]`` multiplies the basis function of degree ``eta`` on the
    (0-based) interval ``j``.
    """

    partition: object
    degree: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float).reshape(self.partition.n, self.degree + 1)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def coefficients(self):
        """Flat interval-major coefficient vector of length ``n (r + 1)``."""
        return self.coeffs.ravel()

    def __call__(self, t):
        return pp_eval(self, t)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values of a function at every node of a composite rule."""

    rule: object
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.rule.size,):
            raise ShapeError(f"expected {self.rule.size} node values, got shape {values.shape}")
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise NonFiniteValueError(f"non-finite value at node index {bad[0]}", int(bad[0]))
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)


def _check_points(t):
    t = np.asarray(t, dtype=float)
    if np.any(~(t >= 0.0)) or np.any(~(t <= 1.0)):
        raise DomainError("evaluation points must lie in [0, 1]")
    return t


def locate(partition, t):
    """0-based index of the interval ``(t_{j-1}, t_j]`` containing ``t``."""
    t = _check_points(t)
    j = np.searchsorted(partition.breakpoints, t, side="left") - 1
    return np.clip(j, 0, partition.n - 1)


def _local_coordinate(partition, j, t):
    h = partition.h
    t_right = (j + 1) / partition.n
    t_left = j / partition.n
    return (2.0 * t - t_right - t_left) / h


def basis_eval(partition, j, eta, t):
    """Evaluate basis function ``phi_{j,eta}`` (``j`` is 1-based) at ``t``."""
    if not 1 <= j <= partition.n:
        raise PreconditionError(f"interval index {j} outside 1..{partition.n}")
    if eta < 0:
        raise PreconditionError(f"degree {eta} must be nonnegative")
    t = _check_points(t)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    inside = locate(partition, t) == j - 1
    y = _local_coordinate(partition, j - 1, t)
    coef = np.zeros(eta + 1)
    coef[eta] = 1.0
    out = np.where(inside, np.sqrt((2 * eta + 1) / partition.h) * legendre.legval(y, coef), 0.0)
    return float(out[0]) if scalar else out


def local_basis(rule, r):
    """Basis values at the nodes of one coarse interval.

    Returns an array of shape ``(p * rho, r + 1)``.  The partition is
    uniform, so the same block serves every interval.
    """
    p = rule.partition.p
    frac = ((np.arange(p)[:, None] + rule.basic.nodes[None, :]) / p).ravel()
    return LegendreBasis(r)(2.0 * frac - 1.0) * np.sqrt(2.0 / rule.partition.h)


def _local_weights(rule):
    return np.tile(rule.basic.weights * rule.partition.h_fine, rule.partition.p)


def _require_exactness(rule, r):
    if rule.rho < r + 1:
        raise PreconditionError(
            f"a {rule.rho}-point rule is not exact to degree {2 * r}; need rho >= {r + 1}"
        )


def _sample(f, rule):
    if isinstance(f, GridFunction):
        if not f.rule.compatible(rule):
            raise ShapeError("grid function was sampled on a different rule")
        return f.values
    if isinstance(f, np.ndarray):
        if f.shape[0] != rule.size:
            raise ShapeError(f"expected {rule.size} node values, got {f.shape[0]}")
        return f
    return sample_to_grid(f, rule).values


def discrete_inner_product(f, g, j, rule):
    """Quadrature inner product restricted to the 1-based interval ``j``."""
    n = rule.partition.n
    if not 1 <= j <= n:
        raise PreconditionError(f"interval index {j} outside 1..{n}")
    k = rule.nodes_per_interval
    sl = slice((j - 1) * k, j * k)
    fv = _sample(f, rule)[sl]
    gv = _sample(g, rule)[sl]
    return float(np.sum(_local_weights(rule) * (fv * gv)))


def project_values(values, rule, r):
    """Projection coefficients of node values.

    ``values`` has shape ``(N, ...)``; the result has shape ``(n, r + 1, ...)``.
    Trailing axes are projected independently, which lets Jacobian columns
    be projected in one call.
    """
    _require_exactness(rule, r)
    values = np.asarray(values, dtype=float)
    n = rule.partition.n
    k = rule.nodes_per_interval
    blocks = values.reshape((n, k) + values.shape[1:])
    weighted_basis = local_basis(rule, r) * _local_weights(rule)[:, None]
    return np.einsum("ka,jk...->ja...", weighted_basis, blocks)


def expand_coefficients(coeffs, rule):
    """Node values of the piecewise polynomial(s) with coefficients ``coeffs``.

    ``coeffs`` has shape ``(n, r + 1, ...)``; the result has shape ``(N, ...)``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    r = coeffs.shape[1] - 1
    vals = np.einsum("ka,ja...->jk...", local_basis(rule, r), coeffs)
    return vals.reshape((rule.size,) + coeffs.shape[2:])


def basis_matrix(rule, r):
    """Dense ``(N, n (r + 1))`` matrix of basis values at all nodes."""
    n = rule.partition.n
    d = r + 1
    eye = np.eye(n * d).reshape(n, d, n * d)
    return expand_coefficients(eye, rule)


def project(f, rule, r):
    """Discrete orthogonal projection of ``f`` onto piecewise polynomials of degree ``r``.

    Parameters
    ----------
    f : callable, GridFunction, PiecewisePolynomial or array
        Anything that can be sampled at the nodes of ``rule``.
    rule : CompositeRule
    r : int
        Polynomial degree; the rule must have at least ``r + 1`` points.

    Returns
    -------
    PiecewisePolynomial
    """
    _require_exactness(rule, r)
    coeffs = project_values(_sample(f, rule), rule, r)
    return PiecewisePolynomial(rule.partition, r, coeffs)


def pp_eval(poly, t):
    """Evaluate a piecewise polynomial, using the left interval at breakpoints."""
    t = _check_points(t)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    j = locate(poly.partition, t)
    y = _local_coordinate(poly.partition, j, t)
    vals = LegendreBasis(poly.degree)(y) * np.sqrt(2.0 / poly.partition.h)
    out = np.sum(vals * poly.coeffs[j], axis=1)
    return float(out[0]) if scalar else out


def sample_to_grid(f, rule):
    """Sample a vectorised function (or piecewise polynomial) at every node."""
    if isinstance(f, PiecewisePolynomial):
        if f.partition != rule.partition:
            raise ShapeError("piecewise polynomial lives on a different partition")
        values = expand_coefficients(f.coeffs, rule)
    else:
        values = np.broadcast_to(np.asarray(f(rule.nodes), dtype=float), rule.nodes.shape)
    return GridFunction(rule, values)
