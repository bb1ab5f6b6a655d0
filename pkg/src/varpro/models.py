"""Separable model bases and a small text grammar for them.

A model is ``f(x, a, b) = sum_j a_j * f_j(b, x)``; :class:`ModelBasis` holds
the ordered ``f_j``.  Basis functions take ``(b, x)`` in that order, matching
the ``lambda b, x: ...`` convention.

Text models list one term per basis function, separated by ``;``::

    x; x^2; 1/(x+b0)
    exp(b0*x); exp(b1*x); exp(b2*x)

Terms may use ``x``, ``b0`` .. ``b9``, numeric literals, ``+ - * / ^``,
parentheses and the functions ``exp``, ``log``, ``sin``, ``cos``.  ``^`` is
right-associative and binds tighter than unary minus, so ``-x^2`` is
``-(x^2)``.
"""
import re
from dataclasses import dataclass

import numpy as np

from .exceptions import ArityError, EvaluationError, ParseError

MAX_B_INDEX = 9


class BasisFunction:
    """One basis function ``f_j(b, x)``.

    Parameters
    ----------
    func : callable
        ``func(b, x) -> float``.  With ``vectorized=True`` it must also accept
        a 1-D array ``x`` and return an array of the same shape.
    arity_b : int
        Number of leading ``b`` components the function reads.
    vectorized : bool
        Whether ``func`` can be called on a whole abscissa array at once.
    label : str, optional
        Human-readable description used in reports.
    """

    def __init__(self, func, arity_b, vectorized=False, label=None):
        if arity_b < 0:
            raise ValueError("arity_b must be non-negative")
        self.func = func
        self.arity_b = int(arity_b)
        self.vectorized = vectorized
        self.label = label or getattr(func, "__name__", "f")

    def __call__(self, b, x):
        return self.func(b, x)

    def evaluate(self, b, xs):
        """Evaluate on every abscissa in ``xs``; returns a float array."""
        xs = np.asarray(xs, dtype=np.float64)
        with np.errstate(all="ignore"):
            if self.vectorized:
                out = np.broadcast_to(np.asarray(self.func(b, xs), dtype=np.float64), xs.shape)
            else:
                out = np.array([self.func(b, float(x)) for x in xs], dtype=np.float64)
        return out

    def __repr__(self):
        return f"BasisFunction({self.label!r}, arity_b={self.arity_b})"


@dataclass(frozen=True)
class ModelBasis:
    """Ordered list of basis functions defining a separable model."""

    functions: tuple
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        if not self.functions:
            raise ValueError("a model needs at least one basis function")

    @property
    def n_a(self):
        return len(self.functions)

    @property
    def n_b(self):
        return max(f.arity_b for f in self.functions)

    @classmethod
    def from_callables(cls, fs, n_b, vectorized=False, name="custom"):
        """Wrap plain ``lambda b, x: ...`` callables, all reading ``n_b`` parameters."""
        return cls(tuple(BasisFunction(f, n_b, vectorized=vectorized) for f in fs), name=name)

    def columns(self, b, xs):
        """Return the ``len(xs) x n_a`` matrix of basis values ``f_j(b, x_i)``.

        Raises
        ------
        EvaluationError
            If any basis function raises an arithmetic error or yields a
            non-finite value.
        """
        b = np.asarray(b, dtype=np.float64)
        xs = np.asarray(xs, dtype=np.float64)
        out = np.empty((len(xs), self.n_a))
        for j, f in enumerate(self.functions):
            try:
                col = f.evaluate(b, xs)
            except (ArithmeticError, ValueError) as exc:
                raise EvaluationError(f"basis term {j} failed at b={b.tolist()}: {exc}",
                                      b=b, term=j) from exc
            bad = np.flatnonzero(~np.isfinite(col))
            if bad.size:
                i = int(bad[0])
                raise EvaluationError(
                    f"basis term {j} is not finite at x={xs[i]!r}, b={b.tolist()}",
                    b=b, point=i, term=j)
            out[:, j] = col
        return out

    def evaluate(self, a, b, xs):
        """Model values ``sum_j a_j f_j(b, x)`` on ``xs``."""
        return self.columns(b, xs) @ np.asarray(a, dtype=np.float64)


# -- built-in families -------------------------------------------------------
# Module-level callables (not lambdas) keep the bases picklable for
# process-based ensemble runs.

@dataclass(frozen=True)
class _Exp:
    index: int

    def __call__(self, b, x):
        return np.exp(b[self.index] * x)


def _identity(b, x):
    return x * 1.0


def _square(b, x):
    return x * x


def _pole(b, x):
    return 1.0 / (x + b[0])


def builtin_exp_sum(k):
    """Sum of ``k`` exponentials, ``f_j(b, x) = exp(b_j * x)``.

    Decaying data corresponds to negative ``b_j``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    fs = tuple(BasisFunction(_Exp(j), j + 1, vectorized=True, label=f"exp(b{j}*x)")
               for j in range(k))
    return ModelBasis(fs, name=f"expsum:{k}")


def builtin_example1():
    """Basis ``{x, x^2, 1/(x + b0)}``."""
    return ModelBasis((
        BasisFunction(_identity, 0, vectorized=True, label="x"),
        BasisFunction(_square, 0, vectorized=True, label="x^2"),
        BasisFunction(_pole, 1, vectorized=True, label="1/(x+b0)"),
    ), name="example1")


# -- grammar -----------------------------------------------------------------

_FUNCTIONS = {"exp": np.exp, "log": np.log, "sin": np.sin, "cos": np.cos}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


@dataclass(frozen=True)
class Num:
    value: float

    def eval(self, b, x):
        return self.value


@dataclass(frozen=True)
class Var:
    def eval(self, b, x):
        return x


@dataclass(frozen=True)
class Param:
    index: int

    def eval(self, b, x):
        return b[self.index]


@dataclass(frozen=True)
class Neg:
    operand: object

    def eval(self, b, x):
        return -self.operand.eval(b, x)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def eval(self, b, x):
        lhs = self.left.eval(b, x)
        rhs = self.right.eval(b, x)
        if self.op == "+":
            return lhs + rhs
        if self.op == "-":
            return lhs - rhs
        if self.op == "*":
            return lhs * rhs
        if self.op == "/":
            return np.divide(lhs, rhs)
        return np.power(lhs, rhs)


@dataclass(frozen=True)
class Call:
    name: str
    arg: object

    def eval(self, b, x):
        return _FUNCTIONS[self.name](self.arg.eval(b, x))


def _walk(node):
    yield node
    for child in ("operand", "left", "right", "arg"):
        sub = getattr(node, child, None)
        if sub is not None:
            yield from _walk(sub)


@dataclass(frozen=True)
class Term:
    """A parsed term: its source text and expression tree."""

    source: str
    tree: object

    @property
    def uses_x(self):
        return any(isinstance(n, Var) for n in _walk(self.tree))

    @property
    def arity_b(self):
        return 1 + max((n.index for n in _walk(self.tree) if isinstance(n, Param)), default=-1)

    def __call__(self, b, x):
        x = np.asarray(x, dtype=np.float64)
        return np.broadcast_to(np.asarray(self.tree.eval(b, x), dtype=np.float64), x.shape)


class _Parser:
    """Recursive-descent parser for a single term.

    ``offset`` is the term's position within the full model text so error
    positions refer to the original string.
    """

    def __init__(self, text, offset=0, full=None):
        self.text = text
        self.offset = offset
        self.full = full if full is not None else text
        self.tokens = self._lex()
        self.i = 0

    def _lex(self):
        tokens = []
        pos = 0
        while pos < len(self.text):
            m = _TOKEN_RE.match(self.text, pos)
            if m is None:
                raise ParseError(f"unexpected character {self.text[pos]!r}", self.full,
                                 self.offset + pos, {"number", "x", "b0..b9", "function", "("})
            kind = m.lastgroup
            if kind != "ws":
                tokens.append((kind, m.group(), self.offset + pos))
            pos = m.end()
        tokens.append(("end", "", self.offset + len(self.text)))
        return tokens

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected, tok=None):
        kind, value, pos = tok or self.peek()
        what = "end of term" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {what}", self.full, pos, expected)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail({"number", "x", "b0..b9", "function", "(", "-"})
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail({"+", "-", "*", "/", "^", "end of term"})
        return node

    def expr(self):
        node = self.product()
        while self.peek()[1] in ("+", "-"):
            op = self.advance()[1]
            node = BinOp(op, node, self.product())
        return node

    def product(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.advance()
            return Neg(self.unary())
        if self.peek()[1] == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        expected = {"number", "x", "b0..b9", "function", "(", "-"}
        kind, value, pos = self.advance()
        if kind == "num":
            return Num(float(value))
        if kind == "op" and value == "(":
            node = self.expr()
            if self.peek()[1] != ")":
                self.fail({")"})
            self.advance()
            return node
        if kind == "name":
            if value == "x":
                return Var()
            m = re.fullmatch(r"b(\d+)", value)
            if m:
                index = int(m.group(1))
                if index > MAX_B_INDEX:
                    raise ArityError(f"parameter {value} at position {pos} exceeds b{MAX_B_INDEX}")
                return Param(index)
            if value in _FUNCTIONS:
                if self.peek()[1] != "(":
                    self.fail({"("})
                self.advance()
                arg = self.expr()
                if self.peek()[1] != ")":
                    self.fail({")"})
                self.advance()
                return Call(value, arg)
            raise ParseError(f"unknown name {value!r}", self.full, pos, expected)
        self.fail(expected, (kind, value, pos))


def parse_term(text):
    """Parse one term into a :class:`Term`."""
    return Term(text.strip(), _Parser(text).parse())


def parse_model(source):
    """Parse ``;``-separated terms into a :class:`ModelBasis`.

    Each basis function's ``arity_b`` is ``1 +`` the largest ``b`` index in
    its own term; the model's ``n_b`` is the maximum over terms.

    Raises
    ------
    ParseError
        On malformed text; carries the offending position and the set of
        acceptable tokens.
    ArityError
        If a ``b`` index beyond ``b9`` appears.
    """
    if not source or not source.strip():
        raise ParseError("empty model", source or "", 0, {"term"})
    terms = []
    offset = 0
    for piece in source.split(";"):
        if piece.strip():
            terms.append(Term(piece.strip(), _Parser(piece, offset, source).parse()))
        else:
            raise ParseError("empty term", source, offset + len(piece), {"term"})
        offset += len(piece) + 1
    return ModelBasis(tuple(BasisFunction(t, t.arity_b, vectorized=True, label=t.source) for t in terms),
                      name=source.strip())


def resolve_model(spec):
    """Turn a CLI model name into a basis.

    Accepts ``example1``, ``expsum:K`` or a grammar string.
    """
    spec = spec.strip()
    if spec == "example1":
        return builtin_example1()
    m = re.fullmatch(r"expsum:(\d+)", spec)
    if m:
        return builtin_exp_sum(int(m.group(1)))
    return parse_model(spec)
