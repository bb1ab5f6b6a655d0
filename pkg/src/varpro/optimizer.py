"""Newton minimizer with a halving steepest-descent fallback.

Each outer iteration proposes a full Newton step built from finite-difference
derivatives.  If the proposal does not lower the objective, the step is
discarded and normalized steepest-descent moves of length ``h`` are tried
from the same point, halving ``h`` after every trial, until one does.
Accepted objective values are therefore non-increasing.

A trial point where the objective raises :class:`ArithmeticError` (or
returns a non-finite value) counts as a failed trial.  Errors raised at the
current iterate, including while differencing around it, propagate.
"""
from dataclasses import dataclass, field

import numpy as np

from . import diffcalc
from .exceptions import (
    NoConvergence,
    SingularHessian,
    SingularMatrix,
    StalledDescent,
    UnstableSolution,
)
from .numkit import as_vector, one_norm, solve_spd


@dataclass(frozen=True)
class OptimizerSettings:
    """Tolerances and limits for :func:`minimize`.

    Parameters
    ----------
    ap : float
        Absolute precision target; also the floor on ``one_norm(H)`` below
        which the problem is declared unstable.
    rp : float
        Relative precision target.
    ns : int
        Maximum number of Newton iterations.
    h0 : float
        Initial steepest-descent step length.
    fd_step : float
        Finite-difference step for gradient and Hessian.
    max_backtracks : int
        Maximum number of step halvings inside one fallback.
    """

    ap: float = 1e-6
    rp: float = 1e-4
    ns: int = 20
    h0: float = 10.0
    fd_step: float = 1e-4
    max_backtracks: int = 200

    def __post_init__(self):
        if not (self.ap > 0 and self.rp > 0 and self.h0 > 0 and self.fd_step > 0):
            raise ValueError("ap, rp, h0 and fd_step must be positive")
        if self.ns < 1 or self.max_backtracks < 1:
            raise ValueError("ns and max_backtracks must be at least 1")


@dataclass(frozen=True)
class OptimumReport:
    """Outcome of a successful :func:`minimize` call.

    ``objective_trace`` holds the objective at the starting point followed by
    the value accepted at the end of every iteration.
    """

    x_min: np.ndarray
    hessian_at_min: np.ndarray
    iterations_used: int
    descent_reversions: int
    objective_trace: tuple = field(default=())

    @property
    def value(self):
        return self.objective_trace[-1]


def newton_step(grad, hess):
    """Solve ``hess @ d = grad``; the caller moves to ``x - d``."""
    grad = np.asarray(grad, dtype=np.float64)
    try:
        return solve_spd(hess, grad)
    except SingularMatrix as exc:
        raise SingularHessian(f"Newton system is singular: {exc}") from exc


def _evaluate(f, x, trial=False):
    try:
        fx = float(f(x))
    except ArithmeticError:
        # a trial point the objective cannot handle is simply not a decrease
        if trial:
            return np.inf
        raise
    # NaN would make every comparison false and silently accept the point
    return fx if np.isfinite(fx) else np.inf


def minimize(f, x0, settings=None):
    """Minimize ``f`` starting from ``x0``.

    Parameters
    ----------
    f : callable
        Scalar objective taking a 1-D float array.
    x0 : array_like
        Starting point.
    settings : OptimizerSettings, optional

    Returns
    -------
    OptimumReport

    Raises
    ------
    UnstableSolution
        The Hessian 1-norm fell below ``settings.ap``.
    SingularHessian
        The Newton system could not be solved.
    StalledDescent
        ``max_backtracks`` halvings failed to lower the objective.
    NoConvergence
        ``settings.ns`` iterations elapsed without meeting the tolerance.
    """
    s = settings or OptimizerSettings()
    x = as_vector(x0, "x0")
    fx = _evaluate(f, x)
    trace = [fx]
    h = s.h0
    reversions = 0

    for k in range(s.ns):
        grad = diffcalc.gradient(f, x, s.fd_step)
        H = diffcalc.hessian(f, x, s.fd_step)
        if not np.all(np.isfinite(H)) or not np.all(np.isfinite(grad)):
            raise SingularHessian("non-finite derivatives", iterate=x, iteration=k, value=fx)
        if one_norm(H) < s.ap:
            raise UnstableSolution("unstable solution", iterate=x, iteration=k, value=fx)
        try:
            step = newton_step(grad, H)
        except SingularHessian as exc:
            raise SingularHessian(str(exc), iterate=x, iteration=k, value=fx) from exc

        fx_old, x_old, x = fx, x, x - step
        fx = _evaluate(f, x, trial=True)
        if fx > fx_old:
            reversions += 1
            n = one_norm(grad)
            if n == 0.0:
                raise StalledDescent("zero gradient, no descent direction",
                                     iterate=x_old, iteration=k, value=fx_old)
            backtracks = 0
            while fx > fx_old:
                if backtracks == s.max_backtracks:
                    raise StalledDescent(f"no decrease after {backtracks} step halvings",
                                         iterate=x_old, iteration=k, value=fx_old)
                # every trial starts from the iteration's starting point
                fx, x = fx_old, x_old
                x_old, x = x, x - grad / n * h
                fx_old, fx = fx, _evaluate(f, x, trial=True)
                h = h / 2
                backtracks += 1
        trace.append(fx)
        h = one_norm(x - x_old) * 2
        if k > 2 and h / 2 < max(s.ap, one_norm(x) * s.rp):
            return OptimumReport(
                x_min=x,
                hessian_at_min=diffcalc.hessian(f, x, s.fd_step),
                iterations_used=k + 1,
                descent_reversions=reversions,
                objective_trace=tuple(trace),
            )
    raise NoConvergence(f"no convergence in {s.ns} iterations",
                        iterate=x, iteration=s.ns - 1, value=fx)
