"""Hessian measures of smooth and kinked functions.

For a quadratic the degree-j measure has density [A]_j, the sum of the
principal j-minors of the Hessian. Kinks add mass on the crease, which the
parallel-set volume picks up as well: we fit the polynomial s -> vol P_s and
read the measures off its coefficients.
"""
import numpy as np

from hessval import Ball, JointRegion, Quadratic, phi_measure, pointwise_max
from hessval import theta_coefficients

q = Quadratic([[1.0, 0.3], [0.3, 2.0]])
bounds = [[-1.0, 1.0], [-1.0, 1.0]]
for j in range(3):
    mass = phi_measure(q, j).mass(bounds)
    print(f"quadratic, degree {j}: mass on box {mass:.10f}")
print("  expected", [4.0, 4 * 3.0, 4 * (2.0 - 0.09)])

# entry k of the fit is the coefficient of s^k; for c|x|^2/2 on the unit
# disc these are pi * C(2, k) * c^k
c = 0.7
fit = theta_coefficients(Quadratic(c * np.eye(2)), JointRegion(Ball(1.0)),
                         samples=200_000, seed=42)
print("parallel-set fit:", np.round(fit.coefficients, 4),
      "+/-", np.round(fit.stderr, 4))
print("  expected", np.round(np.pi * np.array([1, 2 * c, c * c]), 4))

kink = pointwise_max(Quadratic([[0.0]]), Quadratic([[0.0]], [1.0], 0.0))
m = phi_measure(kink, 1)
print("max(0, x): degree-1 mass of [-1, 1] =",
      m.mass([[-1.0, 1.0]]), "(slope jump 1)")
