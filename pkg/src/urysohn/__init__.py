"""Discrete Galerkin and modified projection solvers for Urysohn integral equations."""
from .errors import (
    ConfigurationError,
    DivergenceError,
    DomainError,
    NonFiniteValueError,
    PreconditionError,
    ShapeError,
    SingularJacobianError,
    UnsupportedRuleError,
    UrysohnError,
)
from .mesh import BasicRule, CompositeRule, UniformPartition, composite_rule, gauss_legendre_rule, integrate
from .operator import KernelTriple, NystromOperator, kernel_derivative_errors
from .problems import (
    UrysohnProblem,
    atkinson_potra_problem,
    green_kernel,
    linear_test_problem,
    reference_integral,
)
from .solvers import (
    NewtonConfig,
    Solution,
    newton_solve,
    solve_discrete_galerkin,
    solve_iterated_galerkin,
    solve_iterated_modified,
    solve_modified_projection,
    solve_nystrom,
)
from .space import (
    GridFunction,
    LegendreBasis,
    PiecewisePolynomial,
    basis_eval,
    discrete_inner_product,
    pp_eval,
    project,
    sample_to_grid,
)
from .study import StudyConfig, StudyRow, emit, run_study, sup_error

__version__ = "0.1.0"
