"""Finite-difference solvers for the 1-D time-fractional sub-diffusion equation.

Central and modified central differences in space, averaged L1 and averaged
SBD convolution quadrature in time, a contour-integral reference kernel and a
self-convergence harness.
"""

from ._kernels import BACKEND
from .errors import (
    AccuracyWarning,
    DivergenceError,
    DomainError,
    EvaluationError,
    InvalidDimensionError,
    InvalidInputError,
    SubdiffError,
)
from .harness import (
    ExperimentCase,
    RateReport,
    coarsen_restrict,
    emit,
    load_cases,
    norms,
    prolong_linear,
    run_case,
)
from .mesh import Grid, TridiagonalOperator, build_laplacian, eigenpairs, tridiag_solve
from .oracle import ContourSpec, kernel_e, semi_discrete_reference
from .projection import (
    FunctionDescriptor,
    project_PN_on_grid,
    sample_on_grid,
    sine_coefficients,
)
from .stepper import (
    ProblemSpec,
    SeparableSource,
    SolutionField,
    SolverConfig,
    Spatial,
    Trajectory,
    advance,
    discretize_data,
    scalar_reduce,
    step_matrix,
)
from .weights import Scheme, WeightSequence, l1bar_weights, sbd_weights

__version__ = "0.1.0"
