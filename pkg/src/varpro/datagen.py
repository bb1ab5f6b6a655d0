"""Synthetic datasets with proportional Gaussian noise.

Randomness comes from :class:`numpy.random.Generator` over the PCG64 bit
generator, seeded explicitly; Gaussian deviates use NumPy's ziggurat
sampler (``Generator.normal``).  The same seed gives the same dataset on
every platform for a given NumPy release.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import ZeroUncertainty
from .projection import DataPoint, Dataset


@dataclass(frozen=True)
class NoiseSpec:
    """Proportional noise: ``y = y_true * (1 + N(0, relative_sigma))``.

    The uncertainty attached to each point is ``|y_true| * error_fraction``,
    where ``error_fraction`` defaults to ``relative_sigma``.  Set it
    explicitly to generate noiseless data with non-zero error bars.
    """

    relative_sigma: float
    seed: int = 0
    error_fraction: Optional[float] = None

    def __post_init__(self):
        if self.relative_sigma < 0:
            raise ValueError("relative_sigma must be non-negative")
        if self.error_fraction is not None and self.error_fraction < 0:
            raise ValueError("error_fraction must be non-negative")

    @property
    def dy_fraction(self):
        return self.relative_sigma if self.error_fraction is None else self.error_fraction

    def rng(self, offset=0):
        return np.random.Generator(np.random.PCG64(self.seed + offset))


@dataclass(frozen=True)
class GridSpec:
    """Equally spaced abscissae ``start + i * step`` for ``i < count``."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("grid count must be at least 1")
        if not self.step > 0:
            raise ValueError("grid step must be positive")

    def points(self):
        return self.start + np.arange(self.count) * self.step


EXAMPLE1_GRID = GridSpec(0.1, 0.1, 100)
EXAMPLE2_GRID = GridSpec(0.0, 0.3, 100)


def make_point(x, true_y, spec, rng, dy=None):
    """Draw one noisy observation of ``true_y``.

    A deviate is always drawn, even at zero noise, so streams stay aligned.
    ``dy`` overrides the uncertainty with an absolute value.

    Raises
    ------
    ZeroUncertainty
        If the resulting uncertainty is zero.
    """
    y = true_y * (1.0 + rng.normal(0.0, spec.relative_sigma))
    if dy is None:
        dy = abs(true_y) * spec.dy_fraction
    if not dy > 0:
        raise ZeroUncertainty(
            f"point at x={x!r} has zero uncertainty; pass an explicit dy or error_fraction")
    return DataPoint(float(x), float(y), float(dy))


def generate_experiment(basis, a, b, grid, spec, dy=None, rng=None):
    """Sample the model ``basis`` with coefficients ``(a, b)`` on ``grid``.

    Parameters
    ----------
    basis : ModelBasis
    a, b : array_like
        True linear and nonlinear parameters.
    grid : GridSpec
    spec : NoiseSpec
    dy : float, optional
        Absolute uncertainty for every point.
    rng : numpy.random.Generator, optional
        Defaults to a fresh generator seeded from ``spec.seed``.
    """
    rng = spec.rng() if rng is None else rng
    xs = grid.points()
    truth = basis.evaluate(a, b, xs)
    return Dataset.from_points(make_point(x, t, spec, rng, dy) for x, t in zip(xs, truth))
