"""
Fitting a rational-plus-polynomial model
========================================

The model ``a0*x + a1*x^2 + a2/(x + b0)`` has three linear coefficients and a
single nonlinear one.  Variable projection turns this into a search over
``b0`` alone: for every trial ``b0`` the best ``a`` comes out of a weighted
linear least-squares solve.
"""

import numpy as np

from varpro import (
    EXAMPLE1_GRID,
    FitProblem,
    NoiseSpec,
    builtin_example1,
    fit,
    generate_experiment,
    parameter_errors,
    reduced_objective,
)

basis = builtin_example1()
a_true, b_true = [1.0, 2.0, 300.0], [10.0]

# %%
# Noiseless data first: the fit must land on the generating parameters.
exact = generate_experiment(basis, a_true, b_true, EXAMPLE1_GRID,
                            NoiseSpec(0.0, seed=0, error_fraction=0.01))
result = fit(FitProblem(exact, basis, b0=[5.0]))
print("noiseless  a =", np.round(result.a, 6), " b =", np.round(result.b, 6))

# %%
# Now 1% multiplicative noise, with 1% error bars on every point.
data = generate_experiment(basis, a_true, b_true, EXAMPLE1_GRID, NoiseSpec(0.01, seed=5))
problem = FitProblem(data, basis, b0=[5.0])
result = fit(problem)
err = parameter_errors(result)
print(f"noisy      a = {np.round(result.a, 3)}  b = {result.b[0]:.3f} +- {err[0]:.3f}")
print(f"chi2/dof = {result.chi2 / result.dof:.3f} after {result.iterations} iterations")

# %%
# The reduced objective ``g(b)`` is a one-dimensional curve here, so we can
# look at it directly.  Its minimum is where the optimizer stopped.
g = reduced_objective(problem)
for b in np.linspace(result.b[0] - 3, result.b[0] + 3, 7):
    marker = "  <- fit" if abs(b - result.b[0]) < 1e-9 else ""
    print(f"  g({b:7.3f}) = {g([b]):10.3f}{marker}")

# %%
# ``b0`` is only loosely constrained by 1% data: the error bar above is a
# couple of units.  Different noise draws scatter accordingly.
bs = []
for seed in range(10):
    d = generate_experiment(basis, a_true, b_true, EXAMPLE1_GRID, NoiseSpec(0.01, seed))
    try:
        bs.append(fit(FitProblem(d, basis, [5.0])).b[0])
    except ArithmeticError as exc:
        print(f"seed {seed}: {type(exc).__name__}")
print("b0 over 10 draws:", np.round(bs, 2))
