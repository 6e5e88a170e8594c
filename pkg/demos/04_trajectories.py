"""Time evolution of the delayed system: convergence and escape.

Colour convention across all plots: prey x red, memory q green, first
predator dashed blue, second predator yellow.

At r = 13 every trajectory spirals into the equilibrium whatever the
memory rate.  At r = 7 with alpha = 1 the equilibrium is unstable: the
populations swing ever harder until the prey crashes below the
integrator's positivity floor, which ends the run with the partial
trajectory (the model stops being meaningful at such depths).
Run:  python demos/04_trajectories.py   (writes demos/output/trajectories.png)
"""

import pathlib

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ratiomem import PositivityFloorError, equilibrium, integrate, memory_consistency_check
from ratiomem.presets import load_preset

SERIES = (("x", 0, {"color": "red"}),
          ("q", -1, {"color": "green"}),
          ("y1", 1, {"color": "blue", "ls": "--"}),
          ("y2", 2, {"color": "gold"}))

out = pathlib.Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

fig, axes = plt.subplots(1, 2, figsize=(11, 4))

params = load_preset("paper-example", r=13.0)
eq = equilibrium(params)
traj = integrate(params, eq.state(delayed=True).scaled(1.25), t_end=8.0,
                 rel_tol=1e-9, abs_tol=1e-12,
                 sample_times=np.linspace(0.0, 8.0, 801))
for label, col, style in SERIES:
    axes[0].plot(traj.times, traj.states[:, col], label=label, **style)
axes[0].set_title("r = 13, alpha = 1: damped return")
axes[0].legend(loc="upper right", fontsize=8)

params7 = load_preset("paper-example", r=7.0)
eq7 = equilibrium(params7)
try:
    traj7 = integrate(params7, eq7.state(delayed=True).scaled(1.01),
                      t_end=40.0, rel_tol=1e-9, abs_tol=1e-12,
                      sample_times=np.linspace(0.0, 40.0, 4001))
except PositivityFloorError as exc:
    traj7 = exc.trajectory
    print(f"r=7 run hit the positivity floor at t = {traj7.times[-1]:.2f} "
          "(prey crash); plotting the partial trajectory")
for label, col, style in SERIES:
    axes[1].plot(traj7.times, traj7.states[:, col], label=label, **style)
axes[1].set_title("r = 7, alpha = 1: growing swings, prey crash")
axes[1].legend(loc="upper left", fontsize=8)

for ax in axes:
    ax.set_xlabel("t")
fig.tight_layout()
fig.savefig(out / "trajectories.png", dpi=130)
print("wrote", out / "trajectories.png")

dense = integrate(params, eq.state(delayed=True).scaled(1.25), t_end=8.0,
                  rel_tol=1e-10, abs_tol=1e-13,
                  sample_times=np.arange(0.0, 8.0, 0.01))
print("memory variable vs its defining integral, max residual:",
      f"{memory_consistency_check(dense):.3e}")
