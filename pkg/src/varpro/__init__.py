"""Separable nonlinear least squares by variable projection.

Linear coefficients are solved exactly at each trial value of the
nonlinear parameters; the nonlinear parameters are found with a
finite-difference Newton method that falls back to steepest descent.

>>> from varpro import Dataset, FitProblem, builtin_example1, fit
"""
from .datagen import EXAMPLE1_GRID, EXAMPLE2_GRID, GridSpec, NoiseSpec, generate_experiment, make_point
from .diffcalc import gradient, hessian, partial
from .ensemble import (
    EnsembleConfig,
    EnsembleReport,
    ExperimentOutcome,
    parallel_coordinates_export,
    run_ensemble,
)
from .exceptions import *  # noqa: F401,F403
from .models import (
    BasisFunction,
    ModelBasis,
    builtin_example1,
    builtin_exp_sum,
    parse_model,
    resolve_model,
)
from .numkit import one_norm, solve_spd
from .optimizer import OptimizerSettings, OptimumReport, minimize, newton_step
from .priors import GaussianPrior, prior_penalty, two_sigma_filter
from .projection import (
    DataPoint,
    Dataset,
    FitProblem,
    FitResult,
    design_matrix,
    fit,
    linear_solve,
    parameter_errors,
    reduced_objective,
    weighted_target,
)

__version__ = "0.1.0"
