"""Exception hierarchy shared by all varpro modules.

Numerical failures derive from :class:`ArithmeticError` so callers that only
care about "the fit blew up" can catch a single builtin.
"""


class VarproError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatch(VarproError, ValueError):
    """Operands have non-conformable shapes."""


class NonFiniteError(VarproError, ValueError):
    """A vector or matrix was built from NaN or infinite entries."""


class LengthMismatch(VarproError, ValueError):
    """Parameter vectors of different lengths were combined."""


class SingularMatrix(VarproError, ArithmeticError):
    """A linear system is singular or numerically indistinguishable from it."""


class SingularNormalEquations(SingularMatrix):
    """The normal equations of the inner linear fit are singular at ``b``.

    This happens when two basis columns become (nearly) collinear, e.g. two
    exponentials with equal decay constants.
    """

    def __init__(self, message, b=None):
        super().__init__(message)
        self.b = b


class EvaluationError(VarproError, ArithmeticError):
    """A basis function produced a non-finite value or raised.

    ``point`` and ``term`` identify the offending row and column of the
    design matrix when known.
    """

    def __init__(self, message, b=None, point=None, term=None):
        super().__init__(message)
        self.b = b
        self.point = point
        self.term = term


class InvalidProblem(VarproError, ValueError):
    """The fit problem is inconsistent (lengths, too few points, n_b == 0)."""


class ZeroUncertainty(VarproError, ValueError):
    """A generated data point ended up with a zero uncertainty."""


class OptimizerError(VarproError, ArithmeticError):
    """Base class for optimizer failures.

    Attributes
    ----------
    iterate : ndarray or None
        Point at which the failure was detected.
    iteration : int or None
        Zero-based outer iteration index.
    value : float or None
        Last accepted objective value.
    """

    status = "optimizer_error"

    def __init__(self, message, iterate=None, iteration=None, value=None):
        super().__init__(message)
        self.iterate = iterate
        self.iteration = iteration
        self.value = value


class UnstableSolution(OptimizerError):
    status = "unstable_solution"


class SingularHessian(OptimizerError):
    status = "singular_hessian"


class NoConvergence(OptimizerError):
    status = "no_convergence"


class StalledDescent(OptimizerError):
    status = "stalled_descent"


class ParseError(VarproError, ValueError):
    """Malformed model text.

    Attributes
    ----------
    position : int
        Zero-based character offset into the source where parsing failed.
    expected : frozenset of str
        Token kinds that would have been accepted at ``position``.
    """

    def __init__(self, message, source="", position=0, expected=()):
        self.source = source
        self.position = position
        self.expected = frozenset(expected)
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class ArityError(VarproError, ValueError):
    """A model term references parameters the grammar does not support."""


class EmptySelection(VarproError, ValueError):
    """No ensemble experiment survived the prior filter."""


class ConfigError(VarproError, ValueError):
    """An ensemble or CLI configuration is inconsistent."""
