"""Central finite differences for scalar functions of a real vector.

All steps are absolute (not scaled by ``|x_i|``) and the Hessian is built by
differencing the central-difference partials a second time, so a diagonal
entry effectively samples ``f`` at ``x_i +- 2h``.  Inputs are never modified;
every evaluation point is a fresh copy.
"""
import numpy as np


def partial(f, i, h=1e-4):
    """Return the function ``x -> (f(x + h e_i) - f(x - h e_i)) / (2h)``."""

    def df(x):
        up = np.array(x, dtype=np.float64)
        down = up.copy()
        up[i] += h
        down[i] -= h
        return (f(up) - f(down)) / 2 / h

    return df


def gradient(f, x, h=1e-4):
    """Central-difference gradient of ``f`` at ``x`` as a 1-D array."""
    x = np.asarray(x, dtype=np.float64)
    return np.array([partial(f, r, h)(x) for r in range(len(x))])


def hessian(f, x, h=1e-4):
    """Nested central-difference Hessian of ``f`` at ``x``.

    Entry ``(r, c)`` differentiates the ``r``-th partial along coordinate
    ``c``.  The result is not symmetrized.
    """
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    grad = [partial(f, r, h) for r in range(n)]
    return np.array([[partial(grad[r], c, h)(x) for c in range(n)] for r in range(n)])
