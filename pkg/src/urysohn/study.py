"""Mesh-refinement studies: sup-norm errors, empirical orders and tables."""
import csv
import io
import json
import math
import time
from dataclasses import dataclass, field, fields
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import ConfigurationError, UrysohnError
from .mesh import UniformPartition, composite_rule, gauss_legendre_rule
from .problems import get_problem
from .solvers import (
    METHODS,
    NewtonConfig,
    solve_discrete_galerkin,
    solve_iterated_galerkin,
    solve_iterated_modified,
    solve_modified_projection,
    solve_nystrom,
)

TABLE_METHODS = ("galerkin", "iterated_galerkin", "modified", "iterated_modified")
FORMATS = ("csv", "markdown", "json")
CSV_FIELDS = ("n", "method", "error", "order", "iters", "seconds")
DNF = "DNF"


@dataclass(frozen=True)
class StudyConfig:
    """Parameters of a refinement study.

    The quadrature mesh for ``n`` coarse intervals has ``n ** m_exponent``
    panels; ``m_exponent_modified``, when set, replaces it for the modified
    projection pair.
    """

    problem: str = "atkinson-potra"
    degree: int = 0
    n_values: Tuple[int, ...] = (2, 4, 8, 16, 32)
    m_exponent: int = 2
    m_exponent_modified: Optional[int] = None
    rho: int = 2
    tol: float = 1e-12
    max_iter: int = 50
    initial_guess: str = "rhs"
    grid_size: int = 1001
    format: str = "csv"
    methods: Tuple[str, ...] = TABLE_METHODS
    timings: bool = False

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "methods", tuple(self.methods))
        ns = self.n_values
        if not ns or ns[0] < 1 or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigurationError(f"n_values must be positive and strictly increasing, got {ns}")
        for name in ("m_exponent", "m_exponent_modified"):
            a = getattr(self, name)
            if a is not None and a not in (1, 2, 3):
                raise ConfigurationError(f"{name} must be 1, 2 or 3, got {a!r}")
        if self.degree < 0 or self.rho < self.degree + 1:
            raise ConfigurationError(f"need rho >= degree + 1, got rho={self.rho}, degree={self.degree}")
        if self.format not in FORMATS:
            raise ConfigurationError(f"unknown format {self.format!r}; choose from {', '.join(FORMATS)}")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown or not self.methods:
            raise ConfigurationError(f"unknown methods {unknown}; choose from {', '.join(METHODS)}")
        if self.grid_size < 2:
            raise ConfigurationError("grid_size must be at least 2")
        try:
            self.newton
        except UrysohnError as exc:
            raise ConfigurationError(str(exc)) from exc

    @property
    def newton(self):
        return NewtonConfig(self.tol, self.max_iter, self.initial_guess)

    def exponent_for(self, method):
        if method in ("modified", "iterated_modified") and self.m_exponent_modified is not None:
            return self.m_exponent_modified
        return self.m_exponent

    @classmethod
    def from_mapping(cls, data):
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)


@dataclass
class StudyRow:
    """Results for one coarse mesh; ``None`` errors mark failed solves."""

    n: int
    errors: Dict[str, Optional[float]] = field(default_factory=dict)
    orders: Dict[str, Optional[float]] = field(default_factory=dict)
    iterations: Dict[str, Optional[int]] = field(default_factory=dict)
    seconds: Dict[str, Optional[float]] = field(default_factory=dict)

    @property
    def methods(self):
        return list(self.errors)

    def failed(self, method):
        return self.errors.get(method) is None


def error_grid(solution, grid_size=1001):
    """Uniform points, coarse breakpoints and quadrature nodes, sorted."""
    rule = solution.rule
    return np.unique(np.concatenate([
        np.linspace(0.0, 1.0, grid_size),
        rule.partition.breakpoints,
        rule.nodes,
    ]))


def sup_error(solution, exact, grid_size=1001):
    """Largest ``|solution - exact|`` over :func:`error_grid`."""
    if exact is None:
        raise ConfigurationError("the problem has no exact solution to measure errors against")
    s = error_grid(solution, grid_size)
    return float(np.max(np.abs(solution(s) - np.asarray(exact(s), dtype=float))))


def empirical_order(n_coarse, e_coarse, n_fine, e_fine):
    """``log(e_coarse / e_fine) / log(n_fine / n_coarse)``; log2 ratio for doubling."""
    if not (e_coarse > 0 and e_fine > 0):
        return None
    return math.log(e_coarse / e_fine) / math.log(n_fine / n_coarse)


def _solve_pair(kind, problem, n, cfg, methods):
    """Run the base solver of a pair and its iterated variant as requested."""
    base_name, iter_name = kind
    wanted = [name for name in kind if name in methods]
    if not wanted:
        return {}
    partition = UniformPartition.from_counts(n, n ** cfg.exponent_for(base_name))
    solve_base, solve_iter = {
        "galerkin": (solve_discrete_galerkin, solve_iterated_galerkin),
        "modified": (solve_modified_projection, solve_iterated_modified),
    }[base_name]
    out = {}
    t0 = time.perf_counter()
    try:
        base = solve_base(problem, partition, cfg.degree, cfg.rho, cfg.newton)
    except UrysohnError:
        return {name: None for name in wanted}
    t1 = time.perf_counter()
    if base_name in methods:
        out[base_name] = (base, t1 - t0)
    if iter_name in methods:
        kwargs = {base_name: base}
        it = solve_iter(problem, partition, cfg.degree, cfg.rho, cfg.newton, **kwargs)
        out[iter_name] = (it, time.perf_counter() - t0)
    return out


def _solve_nystrom(problem, n, cfg):
    partition = UniformPartition.from_counts(n, n ** cfg.m_exponent)
    rule = composite_rule(gauss_legendre_rule(cfg.rho), partition)
    t0 = time.perf_counter()
    try:
        sol = solve_nystrom(problem, rule, cfg.newton)
    except UrysohnError:
        return {"nystrom": None}
    return {"nystrom": (sol, time.perf_counter() - t0)}


def run_study(cfg):
    """Solve on every mesh in ``cfg.n_values`` and tabulate errors and orders.

    Failed solves are recorded with a ``None`` error and the study carries on.
    """
    problem = get_problem(cfg.problem)
    methods = [m for m in METHODS if m in cfg.methods]
    rows = []
    for n in cfg.n_values:
        results = {}
        if "nystrom" in methods:
            results.update(_solve_nystrom(problem, n, cfg))
        results.update(_solve_pair(("galerkin", "iterated_galerkin"), problem, n, cfg, methods))
        results.update(_solve_pair(("modified", "iterated_modified"), problem, n, cfg, methods))
        row = StudyRow(n)
        for method in methods:
            res = results[method]
            if res is None:
                row.errors[method] = None
                row.iterations[method] = None
                row.seconds[method] = None
                continue
            sol, seconds = res
            row.errors[method] = sup_error(sol, problem.exact, cfg.grid_size)
            row.iterations[method] = sol.iterations
            row.seconds[method] = seconds if cfg.timings else None
        rows.append(row)
    _attach_orders(rows)
    return rows


def _attach_orders(rows):
    prev = None
    for row in rows:
        for method in row.errors:
            row.orders[method] = None
            if prev is None or prev.failed(method) or row.failed(method):
                continue
            row.orders[method] = empirical_order(
                prev.n, prev.errors[method], row.n, row.errors[method]
            )
        prev = row


def has_failures(rows):
    return any(row.failed(m) for row in rows for m in row.errors)


def _records(rows):
    for row in rows:
        for method in row.errors:
            yield {
                "n": row.n,
                "method": method,
                "error": DNF if row.failed(method) else row.errors[method],
                "order": row.orders.get(method),
                "iters": row.iterations.get(method),
                "seconds": row.seconds.get(method),
            }


def _sci(x):
    return "" if x is None else f"{x:.5e}"


def emit(rows, format="csv"):
    """Render study rows as ``csv``, ``markdown`` or ``json`` text."""
    if not rows:
        raise ConfigurationError("nothing to emit: no study rows")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for rec in _records(rows):
            error = rec["error"] if rec["error"] == DNF else _sci(rec["error"])
            iters = "" if rec["iters"] is None else str(rec["iters"])
            writer.writerow([rec["n"], rec["method"], error, _sci(rec["order"]), iters, _sci(rec["seconds"])])
        return buf.getvalue()
    if format == "markdown":
        methods = rows[0].methods
        header = ["n"]
        for m in methods:
            header += [f"{m} error", f"{m} order"]
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        for row in rows:
            cells = [str(row.n)]
            for m in methods:
                err, order = row.errors.get(m), row.orders.get(m)
                cells.append(DNF if err is None else f"{err:.2e}")
                cells.append("" if order is None else f"{order:.2f}")
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"
    if format == "json":
        return json.dumps(list(_records(rows)), indent=1) + "\n"
    raise ConfigurationError(f"unknown format {format!r}; choose from {', '.join(FORMATS)}")


def rows_from_json(text):
    """Inverse of ``emit(rows, "json")``."""
    rows = {}
    for rec in json.loads(text):
        row = rows.setdefault(rec["n"], StudyRow(rec["n"]))
        method = rec["method"]
        row.errors[method] = None if rec["error"] == DNF else rec["error"]
        row.orders[method] = rec["order"]
        row.iterations[method] = rec["iters"]
        row.seconds[method] = rec["seconds"]
    return list(rows.values())
