"""Variable projection: fit separable models by eliminating the linear part.

For fixed nonlinear parameters ``b`` the linear coefficients ``a`` that
minimize chi-squared solve the weighted normal equations exactly, so the
outer search only has to explore ``b``.  The outer search minimizes

    g(b) = |A(b) a(b) - z|^2 + penalty(b)

where ``A[i, j] = f_j(b, x_i) / dy_i`` and ``z_i = y_i / dy_i``.
"""
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import optimizer
from .exceptions import (
    InvalidProblem,
    LengthMismatch,
    NonFiniteError,
    SingularHessian,
    SingularMatrix,
    SingularNormalEquations,
)
from .models import ModelBasis
from .numkit import as_vector, one_norm, solve_spd
from .optimizer import OptimizerSettings
from .priors import GaussianPrior, prior_penalty


class DataPoint(NamedTuple):
    x: float
    y: float
    dy: float


@dataclass(frozen=True)
class Dataset:
    """Ordered ``(x, y, dy)`` observations stored column-wise."""

    x: np.ndarray
    y: np.ndarray
    dy: np.ndarray

    def __post_init__(self):
        cols = [np.array(c, dtype=np.float64).reshape(-1) for c in (self.x, self.y, self.dy)]
        if not (cols[0].size == cols[1].size == cols[2].size) or cols[0].size == 0:
            raise InvalidProblem("x, y and dy must be non-empty and of equal length")
        if not all(np.all(np.isfinite(c)) for c in cols):
            raise NonFiniteError("dataset contains non-finite values")
        if np.any(cols[2] <= 0):
            i = int(np.flatnonzero(cols[2] <= 0)[0])
            raise InvalidProblem(f"uncertainty must be positive (point {i} has dy={cols[2][i]!r})")
        for name, c in zip(("x", "y", "dy"), cols):
            c.flags.writeable = False
            object.__setattr__(self, name, c)

    @classmethod
    def from_points(cls, points):
        """Build from an iterable of ``(x, y, dy)`` triples."""
        rows = [tuple(p) for p in points]
        if not rows:
            raise InvalidProblem("dataset needs at least one point")
        x, y, dy = zip(*rows)
        return cls(x, y, dy)

    def __len__(self):
        return self.x.size

    def __iter__(self):
        for x, y, dy in zip(self.x, self.y, self.dy):
            yield DataPoint(float(x), float(y), float(dy))

    @property
    def points(self):
        return list(self)


def design_matrix(basis, data, b):
    """Weighted design matrix ``A[i, j] = f_j(b, x_i) / dy_i``."""
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if b.size != basis.n_b:
        raise LengthMismatch(f"model expects {basis.n_b} nonlinear parameters, got {b.size}")
    return basis.columns(b, data.x) / data.dy[:, None]


def weighted_target(data):
    """Vector ``z_i = y_i / dy_i``."""
    return data.y / data.dy


def linear_solve(basis, data, b, reference_norm=False):
    """Best linear coefficients at fixed ``b`` and the resulting chi-squared.

    Parameters
    ----------
    basis : ModelBasis
    data : Dataset
    b : array_like
    reference_norm : bool
        If true, chi-squared is the squared 1-norm of the weighted residual
        (sum of absolute values, squared) instead of the sum of squares.
        Only useful for reproducing historical outputs.

    Returns
    -------
    a : ndarray
    chi2 : float

    Raises
    ------
    SingularNormalEquations
        If ``A^T A`` is singular at this ``b``.
    """
    if len(data) < basis.n_a:
        raise InvalidProblem(f"{len(data)} points cannot determine {basis.n_a} linear coefficients")
    A = design_matrix(basis, data, b)
    z = weighted_target(data)
    try:
        a = solve_spd(A.T @ A, A.T @ z)
    except SingularMatrix as exc:
        raise SingularNormalEquations(
            f"model {basis.name!r} is degenerate at b={np.asarray(b).tolist()}: {exc}",
            b=np.array(b, dtype=np.float64)) from exc
    r = A @ a - z
    chi2 = one_norm(r) ** 2 if reference_norm else float(r @ r)
    return a, chi2


@dataclass(frozen=True)
class FitProblem:
    """Everything needed to run :func:`fit`.

    ``settings`` defaults to 200 Newton iterations.
    """

    data: Dataset
    basis: ModelBasis
    b0: np.ndarray
    prior: Optional[GaussianPrior] = None
    settings: OptimizerSettings = field(default_factory=lambda: OptimizerSettings(ns=200))
    reference_norm: bool = False

    def __post_init__(self):
        b0 = np.array(self.b0, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "b0", b0)
        if self.basis.n_b == 0:
            raise InvalidProblem("model has no nonlinear parameters; use linear_solve directly")
        if b0.size != self.basis.n_b:
            raise InvalidProblem(f"b0 has {b0.size} entries but the model has {self.basis.n_b} "
                                 "nonlinear parameters")
        if not np.all(np.isfinite(b0)):
            raise InvalidProblem("b0 must be finite")
        if self.prior is not None and len(self.prior) != self.basis.n_b:
            raise InvalidProblem(f"prior has {len(self.prior)} entries but the model has "
                                 f"{self.basis.n_b} nonlinear parameters")
        if len(self.data) < self.basis.n_a:
            raise InvalidProblem(f"{len(self.data)} points cannot determine "
                                 f"{self.basis.n_a} linear coefficients")


@dataclass(frozen=True)
class FitResult:
    """Outcome of :func:`fit`.

    ``chi2`` is the data term only; ``chi2_augmented`` adds the prior
    penalty and is the quantity that was minimized.  ``hessian`` is the
    finite-difference Hessian of the reduced objective at ``b``.
    """

    a: np.ndarray
    b: np.ndarray
    chi2: float
    chi2_augmented: float
    hessian: np.ndarray
    n_points: int
    n_params: int
    iterations: int = 0
    descent_reversions: int = 0
    objective_trace: tuple = ()

    @property
    def dof(self):
        return self.n_points - self.n_params


def reduced_objective(problem):
    """Return ``g(b)``: the minimum chi-squared over ``a`` plus the prior penalty."""
    basis, data, prior = problem.basis, problem.data, problem.prior
    reference_norm = problem.reference_norm

    def g(b):
        _, chi2 = linear_solve(basis, data, b, reference_norm)
        if prior is not None:
            chi2 += prior_penalty(prior, b)
        return chi2

    return g


def fit(problem):
    """Fit ``problem`` and return a :class:`FitResult`.

    The nonlinear parameters are optimized with
    :func:`varpro.optimizer.minimize`; the linear ones are re-solved at the
    optimum.  Optimizer and linear-algebra failures propagate unchanged.
    """
    g = reduced_objective(problem)
    report = optimizer.minimize(g, problem.b0, problem.settings)
    b = report.x_min
    a, chi2 = linear_solve(problem.basis, problem.data, b, problem.reference_norm)
    penalty = prior_penalty(problem.prior, b) if problem.prior is not None else 0.0
    return FitResult(
        a=a,
        b=b,
        chi2=chi2,
        chi2_augmented=chi2 + penalty,
        hessian=report.hessian_at_min,
        n_points=len(problem.data),
        n_params=problem.basis.n_a + problem.basis.n_b,
        iterations=report.iterations_used,
        descent_reversions=report.descent_reversions,
        objective_trace=report.objective_trace,
    )


def curvature_errors(hessian):
    """One-sigma errors ``sqrt(2 * diag(H^-1))`` from a chi-squared Hessian."""
    H = np.atleast_2d(np.asarray(hessian, dtype=np.float64))
    n = H.shape[0]
    try:
        cov = np.column_stack([solve_spd(H, e) for e in np.eye(n)])
    except SingularMatrix as exc:
        raise SingularHessian(f"Hessian is singular: {exc}") from exc
    with np.errstate(invalid="ignore"):
        return np.sqrt(2.0 * np.diag(cov))


def parameter_errors(result):
    """Curvature-based uncertainties on the fitted nonlinear parameters."""
    return curvature_errors(result.hessian)
