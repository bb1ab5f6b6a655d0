"""
The stabilized Newton optimizer on its own
==========================================

``minimize`` works on any smooth scalar function of a vector.  When a full
Newton step would go uphill it falls back to normalized steepest-descent
moves with a halving step, so the objective never increases.
"""

import numpy as np

from varpro import OptimizerSettings, UnstableSolution, minimize

# %%
# A convex quadratic is solved by the first Newton step; the remaining
# iterations only confirm convergence.
rep = minimize(lambda x: (x[0] - 3) ** 2 + (x[1] + 1) ** 2, [0.0, 0.0])
print("quadratic:", rep.x_min, "iterations:", rep.iterations_used)

# %%
# In Rosenbrock's valley full Newton steps keep overshooting, and the
# fallback does most of the work.  It is slow but never goes uphill.
rosen = lambda x: (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2
rep = minimize(rosen, [-1.2, 1.0], OptimizerSettings(ns=1000))
trace = np.array(rep.objective_trace)
print(f"rosenbrock: x = {np.round(rep.x_min, 5)} after {rep.iterations_used} iterations, "
      f"{rep.descent_reversions} fallbacks; monotone: {bool(np.all(np.diff(trace) <= 0))}")

# %%
# A (nearly) flat objective has no usable curvature and is reported as
# unstable instead of producing a huge step.
try:
    minimize(lambda x: 1.0 + 1e-9 * x[0] ** 2, [1.0])
except UnstableSolution as exc:
    print("flat objective:", exc, "at", exc.iterate)
