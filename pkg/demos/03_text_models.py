"""
Writing models as text
======================

Any separable model can be written as a ``;``-separated list of terms in
``x`` and ``b0``..``b9``.  Each term becomes one basis function whose
coefficient is fitted linearly.
"""

import numpy as np

from varpro import (
    FitProblem,
    GridSpec,
    NoiseSpec,
    ParseError,
    fit,
    generate_experiment,
    parse_model,
)

# %%
# A damped oscillation on a constant background.
model = parse_model("1; exp(b0*x)*cos(b1*x); exp(b0*x)*sin(b1*x)")
print("terms:", [f.label for f in model.functions], " n_b =", model.n_b)

grid = GridSpec(0.0, 0.05, 200)
data = generate_experiment(model, [0.5, 2.0, 1.0], [-0.4, 3.0], grid,
                           NoiseSpec(0.0, 0), dy=0.02)
result = fit(FitProblem(data, model, b0=[-0.3, 2.8]))
print("a =", np.round(result.a, 6), " b =", np.round(result.b, 6))

# %%
# Malformed text is rejected with the offending position.
try:
    parse_model("x; exp(b0*x")
except ParseError as exc:
    print(exc)
