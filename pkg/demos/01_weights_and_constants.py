"""Geometric constants of monomial weights on orthant cones.

A weight w(x) = prod x_j^{A_j} on the cone {x_j > 0} behaves like a
density in D = d + sum(A_j) effective dimensions: the weighted measure of
a ball scales as mu(B_r) = C_D r^D and the weighted perimeter of the unit
ball is P_w = D C_D.  This script evaluates the closed forms and checks
them against independent quadrature.
"""

import numpy as np

from conemoser import (
    ConeSpec,
    WeightSpec,
    compute_constants,
    unit_ball_measure_quadrature,
    weight_eval,
)

cases = [
    ("half-plane, w = x1", WeightSpec(ConeSpec(2, (1,)), (1.0,))),
    ("quadrant, w = x1 x2", WeightSpec(ConeSpec(2, (1, 2)), (1.0, 1.0))),
    ("octant, w = x1 x2 x3", WeightSpec(ConeSpec(3, (1, 2, 3)), (1.0, 1.0, 1.0))),
    ("half-plane, w = sqrt(x1)", WeightSpec(ConeSpec(2, (1,)), (0.5,))),
]

for label, spec in cases:
    consts = compute_constants(spec)
    quad = unit_ball_measure_quadrature(spec, budget=400_000)
    print(f"{label}:")
    print(f"  D = {consts.D:g}, C_D = {consts.C_D:.10f} "
          f"(quadrature {quad.value:.10f} +- {quad.error_estimate:.1e})")
    print(f"  P_w = {consts.P_w:.10f}, D*C_D = {consts.D * consts.C_D:.10f}")

# homogeneity: w(kappa x) = kappa^alpha w(x)
spec = cases[0][1]
rng = np.random.default_rng(1)
x = rng.uniform(0.1, 2.0, size=(5, 2))
print("\nhomogeneity check (alpha = 1):")
print("  w(2x) / w(x) =", weight_eval(spec, 2.0 * x) / weight_eval(spec, x))
