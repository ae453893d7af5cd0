"""Uniform partitions of [0, 1] and composite Gauss-Legendre rules.

The coarse partition has ``n`` intervals of width ``h = 1/n``; each coarse
interval is split into ``p`` panels, giving the fine partition with
``m = n p`` panels of width ``h~ = 1/m``.  A composite rule places the
nodes of a basic rule on every fine panel.
"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NonFiniteValueError, PreconditionError, UnsupportedRuleError

MAX_GAUSS_POINTS = 10


@dataclass(frozen=True)
class UniformPartition:
    """Coarse partition with ``n`` intervals refined ``p`` times.

    Parameters
    ----------
    n : int
        Number of coarse intervals.
    p : int
        Number of fine panels per coarse interval.
    """

    n: int
    p: int = 1

    def __post_init__(self):
        for name in ("n", "p"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise PreconditionError(f"{name} must be a positive integer, got {value!r}")

    @classmethod
    def from_counts(cls, n, m):
        """Build the partition with ``n`` coarse intervals and ``m`` fine panels."""
        if m % n:
            raise PreconditionError(f"m={m} is not a multiple of n={n}")
        return cls(n, m // n)

    @property
    def m(self):
        return self.n * self.p

    @property
    def h(self):
        return 1.0 / self.n

    @property
    def h_fine(self):
        return 1.0 / self.m

    @property
    def breakpoints(self):
        """Coarse breakpoints ``t_j = j/n``, j = 0..n."""
        return np.arange(self.n + 1) / self.n

    @property
    def fine_breakpoints(self):
        """Fine breakpoints ``s_i = i/m``, i = 0..m."""
        return np.arange(self.m + 1) / self.m


@dataclass(frozen=True, eq=False)
class BasicRule:
    """Quadrature rule on [0, 1] with ``rho`` nodes."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def rho(self):
        return len(self.nodes)


def _legendre_and_derivative(k, x):
    p_prev, p = 1.0, x
    for j in range(2, k + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    if k == 0:
        return 1.0, 0.0
    dp = k * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@lru_cache(maxsize=None)
def gauss_legendre_rule(rho):
    """Return the ``rho``-point Gauss-Legendre rule mapped to [0, 1].

    Roots of the Legendre polynomial are found by Newton's method from the
    usual cosine initial guesses; only the nonnegative roots are computed
    and the rule is completed by symmetry.

    Raises
    ------
    UnsupportedRuleError
        If ``rho`` is not an integer in ``[1, 10]``.
    """
    if not isinstance(rho, (int, np.integer)) or not 1 <= rho <= MAX_GAUSS_POINTS:
        raise UnsupportedRuleError(
            f"Gauss-Legendre rules are supported for 1 <= rho <= {MAX_GAUSS_POINTS}, got {rho!r}"
        )
    roots, weights = [], []
    for i in range(1, rho // 2 + 1):
        x = np.cos(np.pi * (i - 0.25) / (rho + 0.5))
        for _ in range(100):
            p, dp = _legendre_and_derivative(rho, x)
            dx = p / dp
            x -= dx
            if abs(dx) < 1e-15:
                break
        _, dp = _legendre_and_derivative(rho, x)
        roots.append(x)
        weights.append(2.0 / ((1.0 - x * x) * dp * dp))
    if rho % 2:
        _, dp = _legendre_and_derivative(rho, 0.0)
        centre = ([0.5], [1.0 / dp**2])
    else:
        centre = ([], [])
    # roots come out in descending order
    left = [0.5 - 0.5 * x for x in roots]
    right = [0.5 + 0.5 * x for x in reversed(roots)]
    nodes = np.array(left + centre[0] + right)
    half_w = [0.5 * w for w in weights]
    w = np.array(half_w + centre[1] + half_w[::-1])
    nodes.setflags(write=False)
    w.setflags(write=False)
    return BasicRule(nodes, w)


@dataclass(frozen=True, eq=False)
class CompositeRule:
    """Basic rule repeated on every fine panel of a partition.

    Nodes are stored flat in (panel, node) order, so node ``(i, q)`` with
    0-based panel ``i`` sits at index ``i * rho + q``.
    """

    partition: UniformPartition
    basic: BasicRule
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def rho(self):
        return self.basic.rho

    @property
    def size(self):
        return len(self.nodes)

    @property
    def nodes_per_interval(self):
        """Number of nodes inside one coarse interval, ``p * rho``."""
        return self.partition.p * self.rho

    def interval_of_node(self):
        """0-based coarse interval index of every node."""
        return np.arange(self.size) // self.nodes_per_interval

    def compatible(self, other):
        return other is self or (
            self.partition == other.partition
            and np.array_equal(self.basic.nodes, other.basic.nodes)
            and np.array_equal(self.basic.weights, other.basic.weights)
        )


def composite_rule(rule, partition):
    """Place ``rule`` on each of the ``m`` fine panels of ``partition``."""
    m = partition.m
    h_fine = partition.h_fine
    starts = np.arange(m) / m
    nodes = (starts[:, None] + rule.nodes[None, :] * h_fine).ravel()
    weights = np.tile(rule.weights * h_fine, m)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return CompositeRule(partition, rule, nodes, weights)


def integrate(rule, f):
    """Apply the composite rule to a vectorised function ``f``."""
    values = np.asarray(f(rule.nodes), dtype=float)
    values = np.broadcast_to(values, rule.nodes.shape)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise NonFiniteValueError(
            f"non-finite integrand at node index {bad[0]} (t={rule.nodes[bad[0]]!r})", int(bad[0])
        )
    return float(rule.weights @ values)
