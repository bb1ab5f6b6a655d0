"""Gaussian priors on the nonlinear parameters."""
from dataclasses import dataclass

import numpy as np

from .exceptions import LengthMismatch
from .numkit import as_vector


@dataclass(frozen=True)
class GaussianPrior:
    """Independent Gaussian prior ``b_i ~ center_i +- width_i``."""

    center: np.ndarray
    width: np.ndarray

    def __post_init__(self):
        center = as_vector(self.center, "prior center")
        width = as_vector(self.width, "prior width")
        if center.shape != width.shape:
            raise LengthMismatch(
                f"prior center has {center.size} entries but width has {width.size}")
        if np.any(width <= 0):
            raise ValueError("prior widths must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "width", width)

    def __len__(self):
        return self.center.size

    def __call__(self, b):
        return prior_penalty(self, b)

    def pulls(self, b):
        """Signed displacements ``(b_i - center_i) / width_i``."""
        b = np.asarray(b, dtype=np.float64)
        if b.shape != self.center.shape:
            raise LengthMismatch(f"expected {self.center.size} parameters, got {b.size}")
        return (b - self.center) / self.width


def prior_penalty(prior, b):
    """Return ``sum_i ((b_i - center_i) / width_i)**2``."""
    return float(np.sum(prior.pulls(b) ** 2))


def two_sigma_filter(prior, b):
    """True if every component lies within two widths of its center (inclusive)."""
    return bool(np.max(np.abs(prior.pulls(b))) <= 2.0)
