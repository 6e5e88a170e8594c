"""Prey zero-growth surface over the two predator densities.

The surface x(y1, y2) where prey growth balances predation folds like
an onion: its outer sheet slopes down (overcrowding regime, a11 < 0)
and the inner sheet slopes up (Allee-effect zone, a11 > 0).  Where the
equilibrium lands decides how robust stability is to memory.
Run:  python demos/05_nullcline_surface.py  (writes demos/output/nullcline.png)
"""

import pathlib

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ratiomem import equilibrium, prey_nullcline_sample
from ratiomem.presets import load_preset

out = pathlib.Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

fig = plt.figure(figsize=(10, 4))
for pos, r in ((1, 7.0), (2, 10.0)):
    params = load_preset("paper-example", r=r)
    eq = equilibrium(params)
    grid1 = np.linspace(0.02 * eq.y_star[0], 4.0 * eq.y_star[0], 36)
    grid2 = np.linspace(0.02 * eq.y_star[1], 4.0 * eq.y_star[1], 36)
    mesh = prey_nullcline_sample(params, grid1, grid2)
    pts = mesh.points()
    ax = fig.add_subplot(1, 2, pos, projection="3d")
    ax.scatter(pts[:, 1], pts[:, 2], pts[:, 0], s=2.5, c=pts[:, 0],
               cmap="viridis")
    ax.scatter([eq.y_star[0]], [eq.y_star[1]], [eq.x_star], color="red",
               s=45, label="equilibrium")
    ax.set_title(f"r = {r:g} (residual {mesh.max_residual:.1e})")
    ax.set_xlabel("y1")
    ax.set_ylabel("y2")
    ax.set_zlabel("x")
    ax.legend(loc="upper left", fontsize=8)
    print(f"r={r:g}: sampled {len(pts)} surface points, "
          f"worst |prey balance| = {mesh.max_residual:.2e}")
fig.tight_layout()
fig.savefig(out / "nullcline.png", dpi=130)
print("wrote", out / "nullcline.png")
