"""Valuations of the radial cone pair.

A cone t|x| restricted to a ball and its conjugate, a shifted cone, carry
Hessian measures concentrated on spheres, so their valuations have closed
forms. This script compares the closed form against direct integration of
the Hessian measures, on both the primal and the dual side.
"""
import numpy as np

from hessval import RadialConeU, RadialConeV, ValuationSpec, bump, hat
from hessval import conjugate, phi_measure, valuate, valuate_cone

n = 3
for name, zeta in [("hat", hat()), ("bump", bump(1.5))]:
    print(f"weight = {name}, n = {n}")
    for j in range(1, n):
        for t in (0.3, 0.9):
            spec = ValuationSpec(j, zeta, n, route="closed_form")
            closed = valuate_cone(spec, t)
            # integrate the weight against the Hessian measure of v_t
            measure = phi_measure(RadialConeV(n, t), j).integrate(zeta)
            # same number reached through the conjugate of u_t
            dual = valuate(ValuationSpec(j, zeta, n, "dual", "closed_form"),
                           conjugate(RadialConeU(n, t)))
            print(f"  j={j} t={t}: closed {closed:.10f}  "
                  f"measure {measure:.10f}  via u* {dual:.10f}")

# the values scale like t -> rho(t): the cone only sees the weight's tail
t = np.linspace(0.05, 1.0, 5)
print("cone values for the hat weight, n = 2:",
      np.round([valuate_cone(ValuationSpec(1, hat(), 2, route="closed_form"),
                             s) for s in t], 6))
