"""Small dense linear-algebra helpers.

Vectors and matrices are plain float64 :class:`numpy.ndarray` objects,
1-D and 2-D respectively.  The helpers here add the shape and finiteness
checks the fitting code relies on, plus the matrix 1-norm used for every
convergence test and a guarded symmetric solve.
"""
import numpy as np
import scipy.linalg as sl

from .exceptions import NonFiniteError, ShapeMismatch, SingularMatrix

EPS = np.finfo(np.float64).eps

#: Largest 1-norm condition number accepted by :func:`solve_spd`.
COND_LIMIT = 1.0 / (100.0 * EPS)

#: Smallest pivot accepted by :func:`solve_spd`, relative to ``one_norm(m)``.
PIVOT_RTOL = 1e-13


def as_vector(v, name="vector"):
    """Return ``v`` as a finite, non-empty 1-D float64 array (a copy)."""
    out = np.array(v, dtype=np.float64)
    if out.ndim == 2 and 1 in out.shape:
        out = out.reshape(-1)
    if out.ndim != 1 or out.size == 0:
        raise ShapeMismatch(f"{name} must be a non-empty 1-D sequence, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return out


def as_matrix(m, name="matrix"):
    """Return ``m`` as a finite 2-D float64 array with at least one row and column."""
    out = np.array(m, dtype=np.float64)
    if out.ndim != 2 or out.shape[0] < 1 or out.shape[1] < 1:
        raise ShapeMismatch(f"{name} must be 2-D and non-empty, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return out


def one_norm(m):
    """Matrix 1-norm: the largest column sum of absolute values.

    A 1-D array is treated as a single column, so its norm is the sum of
    absolute entries.

    >>> one_norm(np.array([[1.0, -2.0], [3.0, 4.0]]))
    6.0
    """
    a = np.asarray(m, dtype=np.float64)
    if a.ndim == 1:
        return float(np.sum(np.abs(a)))
    if a.ndim != 2:
        raise ShapeMismatch(f"one_norm expects a 1-D or 2-D array, got {a.ndim}-D")
    return float(np.max(np.sum(np.abs(a), axis=0)))


def matmul(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim not in (1, 2) or a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def transpose(m):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ShapeMismatch(f"transpose expects a 2-D array, got shape {m.shape}")
    return m.T.copy()


def sub(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatch(f"cannot subtract shapes {a.shape} and {b.shape}")
    return a - b


def scale(v, s):
    return np.asarray(v, dtype=np.float64) * float(s)


def solve_spd(m, rhs):
    """Solve ``m @ x = rhs`` for a symmetric (ideally positive-definite) ``m``.

    Cholesky is tried first; an indefinite matrix falls back to LU with
    partial pivoting.  Either way the system is rejected as singular when
    the 1-norm condition estimate exceeds :data:`COND_LIMIT` or a pivot
    drops below ``PIVOT_RTOL * one_norm(m)``.

    Raises
    ------
    SingularMatrix
        If ``m`` is singular by the criteria above.
    ShapeMismatch
        If ``m`` is not square or ``rhs`` does not match.
    """
    m = as_matrix(m)
    rhs = as_vector(rhs, "rhs")
    n = m.shape[0]
    if m.shape[1] != n:
        raise ShapeMismatch(f"solve_spd needs a square matrix, got {m.shape}")
    if rhs.shape[0] != n:
        raise ShapeMismatch(f"rhs has length {rhs.shape[0]}, expected {n}")

    norm = one_norm(m)
    if norm == 0.0:
        raise SingularMatrix("matrix is identically zero")
    with np.errstate(all="ignore"):
        try:
            cond = np.linalg.cond(m, 1)
        except np.linalg.LinAlgError:
            cond = np.inf
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrix(f"matrix is numerically singular (1-norm condition {cond:.3g})")

    min_pivot = PIVOT_RTOL * norm
    try:
        c, lower = sl.cho_factor(m, check_finite=False)
    except sl.LinAlgError:
        lu, piv = sl.lu_factor(m, check_finite=False)
        if np.min(np.abs(np.diag(lu))) < min_pivot:
            raise SingularMatrix("pivot below threshold in LU factorization") from None
        return sl.lu_solve((lu, piv), rhs, check_finite=False)
    if np.min(np.diag(c)) ** 2 < min_pivot:
        raise SingularMatrix("pivot below threshold in Cholesky factorization")
    return sl.cho_solve((c, lower), rhs, check_finite=False)
