"""Urysohn kernels and the Nystrom discretisation of the integral operator.

Kernels are given as plain numpy-broadcasting callables ``k(s, t, u)``
together with their first and second partial derivatives in ``u``.  The
Nystrom operator replaces the integral over ``t`` by a composite rule:

    K_m(x)(s) = sum_{nodes} w_b k(s, t_b, x(t_b)).

Every sweep over evaluation points is processed in fixed row blocks so the
summation order, and therefore the result, never depends on how many
points are requested at once.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, ShapeError
from .space import GridFunction

#: number of kernel entries evaluated per block
BLOCK_ENTRIES = 1 << 21


@dataclass(frozen=True)
class KernelTriple:
    """Kernel ``k(s, t, u)`` with its first and second ``u``-derivatives.

    ``lower`` and ``upper`` optionally record the smooth pieces on
    ``t <= s`` and ``s <= t``; they are documentation only and are never
    used by the Nystrom sums.
    """

    value: Callable
    du: Callable
    duu: Callable
    lower: Optional[Callable] = None
    upper: Optional[Callable] = None


def kernel_derivative_errors(kernel, probes=100, step=1e-5, seed=0, u_range=(-0.5, 0.5)):
    """Compare analytic ``u``-derivatives with central differences.

    Returns the largest relative errors ``(first, second)`` over ``probes``
    random points ``(s, t, u)``.
    """
    rng = np.random.default_rng(seed)
    s, t = rng.random(probes), rng.random(probes)
    u = rng.uniform(*u_range, probes)

    def rel(approx, exact):
        scale = np.maximum(np.abs(exact), 1e-12)
        return float(np.max(np.abs(approx - exact) / scale))

    fd1 = (kernel.value(s, t, u + step) - kernel.value(s, t, u - step)) / (2 * step)
    fd2 = (kernel.du(s, t, u + step) - kernel.du(s, t, u - step)) / (2 * step)
    return rel(fd1, kernel.du(s, t, u)), rel(fd2, kernel.duu(s, t, u))


class NystromOperator:
    """Quadrature approximation of the Urysohn operator on a composite rule."""

    def __init__(self, kernel, rule):
        self.kernel = kernel
        self.rule = rule

    def _grid_values(self, x):
        if isinstance(x, GridFunction):
            if not x.rule.compatible(self.rule):
                raise ShapeError("grid function was sampled on a different rule")
            return x.values
        x = np.asarray(x, dtype=float)
        if x.shape != (self.rule.size,):
            raise ShapeError(f"expected {self.rule.size} node values, got shape {x.shape}")
        return x

    def _blocks(self, s):
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        s = np.atleast_1d(s)
        if np.any(~(s >= 0.0)) or np.any(~(s <= 1.0)):
            raise DomainError("evaluation points must lie in [0, 1]")
        rows = max(1, BLOCK_ENTRIES // self.rule.size)
        return scalar, s, [slice(a, min(a + rows, len(s))) for a in range(0, len(s), rows)]

    def _sweep(self, func, x, s, right):
        """``sum_b w_b func(s_a, t_b, x_b) right_b`` for each evaluation point."""
        t = self.rule.nodes[None, :]
        xb = x[None, :]
        scalar, s, blocks = self._blocks(s)
        out = np.empty((len(s),) + right.shape[1:])
        for sl in blocks:
            out[sl] = (func(s[sl, None], t, xb) * self.rule.weights) @ right
        return out[0] if scalar else out

    def apply(self, x, s):
        """``K_m(x)(s)`` for a scalar or array of points ``s``."""
        x = self._grid_values(x)
        out = self._sweep(self.kernel.value, x, s, np.ones(len(x)))
        return float(out) if np.ndim(out) == 0 else out

    def apply_derivative(self, x, v, s):
        """``K_m'(x) v`` evaluated at ``s``."""
        x, v = self._grid_values(x), self._grid_values(v)
        out = self._sweep(self.kernel.du, x, s, v)
        return float(out) if np.ndim(out) == 0 else out

    def apply_second_derivative(self, x, v, s):
        """``K_m''(x)(v, v)`` evaluated at ``s``."""
        x, v = self._grid_values(x), self._grid_values(v)
        out = self._sweep(self.kernel.duu, x, s, v * v)
        return float(out) if np.ndim(out) == 0 else out

    def derivative_matrix(self, x, eval_points):
        """Dense matrix ``M[a, b] = w_b l(s_a, t_b, x_b)`` of the linearisation."""
        x = self._grid_values(x)
        _, s, _ = self._blocks(np.atleast_1d(eval_points))
        return self.kernel.du(s[:, None], self.rule.nodes[None, :], x[None, :]) * self.rule.weights

    def derivative_product(self, x, eval_points, right):
        """``derivative_matrix(x, eval_points) @ right`` without forming the matrix."""
        x = self._grid_values(x)
        right = np.asarray(right, dtype=float)
        if right.shape[0] != self.rule.size:
            raise ShapeError(f"right factor has {right.shape[0]} rows, expected {self.rule.size}")
        return self._sweep(self.kernel.du, x, np.atleast_1d(eval_points), right)
