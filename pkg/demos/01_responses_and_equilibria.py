"""Functional responses and closed-form equilibria.

Walks the two ratio-dependent response families, the equilibrium ratios
u* with p(u*) = d, and the prey level that balances total predation.
Run from the repository root:  python demos/01_responses_and_equilibria.py
"""

import numpy as np

from ratiomem import FunctionalResponse, equilibrium, equilibrium_residuals
from ratiomem.presets import load_preset

holling = FunctionalResponse("holling", m=16.0, a=4.0)
ivlev = FunctionalResponse("ivlev", m=16.0, a=1.0)

print("Per capita birth rate p(u) on the predator/prey ratio u:")
for u in (0.01, 0.1, 0.25, 1.0, 5.0):
    print(f"  u={u:<5} holling {holling.value(u):8.4f}   ivlev {ivlev.value(u):8.4f}")

print("\nBoth saturate at m for scarce predators and die off for crowded ones;")
print("the slope is negative everywhere, e.g. holling p'(1/4) =",
      holling.derivative(0.25))

print("\nEquilibrium ratios solve p(u*) = d:")
print("  holling m=16 a=4 d=8  ->  u* =", holling.equilibrium_ratio(8.0))
print("  ivlev   m=16 a=1 d=8  ->  u* =", ivlev.equilibrium_ratio(8.0),
      "( = 1/ln 2 )")

print("\nThe bundled two-predator preset has u1* = u2* = 1/4, so the prey")
print("level is K (1 - 5/r) and every predator sits at a quarter of it:")
for r in (6.0, 8.0, 13.0):
    eq = equilibrium(load_preset("paper-example", r=r))
    print(f"  r={r:<5} x* = {eq.x_star:.6f}   y* = {eq.y_star}")

params = load_preset("paper-example", r=13.0)
eq = equilibrium(params)
print("\nDefining-equation residuals at the computed equilibrium:",
      [f"{v:.2e}" for v in equilibrium_residuals(params, eq)])

print("\nBelow r = 5 the prey growth cannot carry the predation load:")
try:
    equilibrium(load_preset("paper-example", r=5.0))
except Exception as exc:
    print("  r=5 ->", exc)
