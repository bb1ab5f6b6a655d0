"""Batches of simulated experiments: generate, fit, classify, filter."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .datagen import GridSpec, NoiseSpec, generate_experiment
from .exceptions import (
    ConfigError,
    EmptySelection,
    EvaluationError,
    OptimizerError,
    SingularNormalEquations,
)
from .models import ModelBasis
from .optimizer import OptimizerSettings
from .priors import GaussianPrior, two_sigma_filter
from .projection import FitProblem, FitResult, fit

STATUSES = (
    "converged",
    "no_convergence",
    "unstable_solution",
    "singular_hessian",
    "stalled_descent",
    "singular_normal_equations",
    "evaluation_error",
)


@dataclass(frozen=True)
class EnsembleConfig:
    """Settings for :func:`run_ensemble`.

    Experiment ``k`` draws its noise from seed ``noise.seed + k``.  Without
    a prior every converged fit is retained.
    """

    n_experiments: int
    basis: ModelBasis
    a_true: np.ndarray
    b_true: np.ndarray
    grid: GridSpec
    noise: NoiseSpec
    b0: np.ndarray
    prior: Optional[GaussianPrior] = None
    settings: OptimizerSettings = field(default_factory=lambda: OptimizerSettings(ns=200))

    def __post_init__(self):
        if self.n_experiments < 1:
            raise ConfigError("n_experiments must be at least 1")
        for name in ("a_true", "b_true", "b0"):
            object.__setattr__(self, name, np.array(getattr(self, name), dtype=np.float64).reshape(-1))
        n_b = self.basis.n_b
        if self.a_true.size != self.basis.n_a:
            raise ConfigError(f"a_true has {self.a_true.size} entries, model needs {self.basis.n_a}")
        if self.b_true.size != n_b or self.b0.size != n_b:
            raise ConfigError(f"b_true and b0 need {n_b} entries")
        if self.prior is not None and len(self.prior) != n_b:
            raise ConfigError(f"prior has {len(self.prior)} entries, model needs {n_b}")


@dataclass(frozen=True)
class ExperimentOutcome:
    index: int
    status: str
    result: Optional[FitResult] = None
    retained: bool = False
    message: str = ""

    @property
    def converged(self):
        return self.status == "converged"


@dataclass(frozen=True)
class EnsembleReport:
    outcomes: tuple
    n_b: int

    @property
    def n_experiments(self):
        return len(self.outcomes)

    @property
    def converged(self):
        return [o for o in self.outcomes if o.converged]

    @property
    def retained(self):
        return [o for o in self.outcomes if o.retained]

    @property
    def failure_rate(self):
        return 1.0 - len(self.converged) / len(self.outcomes)

    def status_counts(self):
        counts = dict.fromkeys(STATUSES, 0)
        for o in self.outcomes:
            counts[o.status] += 1
        return counts

    @property
    def retained_b_table(self):
        """``(n_retained, n_b)`` array of fitted ``b`` for retained experiments."""
        if not self.retained:
            return np.empty((0, self.n_b))
        return np.array([o.result.b for o in self.retained])

    def retained_medians(self):
        table = self.retained_b_table
        if table.shape[0] == 0:
            raise EmptySelection("no experiment was retained")
        return np.median(table, axis=0)


def _classify(exc):
    if isinstance(exc, OptimizerError):
        return exc.status
    if isinstance(exc, SingularNormalEquations):
        return "singular_normal_equations"
    return "evaluation_error"


def run_experiment(config, k):
    """Generate and fit experiment ``k`` alone; used by :func:`run_ensemble`."""
    data = generate_experiment(config.basis, config.a_true, config.b_true,
                               config.grid, config.noise, rng=config.noise.rng(k))
    problem = FitProblem(data, config.basis, config.b0, config.prior, config.settings)
    try:
        result = fit(problem)
    except (OptimizerError, SingularNormalEquations, EvaluationError) as exc:
        return ExperimentOutcome(k, _classify(exc), message=str(exc))
    retained = True if config.prior is None else two_sigma_filter(config.prior, result.b)
    return ExperimentOutcome(k, "converged", result, retained)


def run_ensemble(config, max_workers=1):
    """Run every experiment and collect the outcomes in index order.

    Individual fit failures are recorded as outcomes, never raised.  With
    ``max_workers > 1`` experiments run in worker processes, which needs
    a picklable basis (built-in and parsed models are).
    """
    indices = range(config.n_experiments)
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            outcomes = list(pool.map(run_experiment, [config] * len(indices), indices))
    else:
        outcomes = [run_experiment(config, k) for k in indices]
    return EnsembleReport(tuple(outcomes), config.basis.n_b)


def parallel_coordinates_export(report):
    """Rows ``(experiment, b0, b1, ...)`` for retained experiments.

    Raises
    ------
    EmptySelection
        If no experiment was retained.
    """
    rows = [(o.index, *o.result.b) for o in report.retained]
    if not rows:
        raise EmptySelection("no experiment was retained; nothing to plot")
    return np.array(rows, dtype=np.float64)
