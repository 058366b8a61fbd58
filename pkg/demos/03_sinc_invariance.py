# coding: utf-8

# # A chirped Sinc packet
#
# Zeroth order: the density is just the initial density, stretched by
# s = 1 + 2 alpha t and scaled by 1/s.  We compare that picture with the exact
# evolution for a weak (alpha = 0.3) and a strong (alpha = 3) chirp, and add the
# first-order correction.

# %%
import os

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from chirpwave import Sinc, chirped_oracle, default_grid, density, factor_coeffs, l2_norm, rel_l2_error
from chirpwave.propagators import psi0_at, sinc_exact, sinc_psi0, sinc_psi1

out = os.environ.get("DEMO_OUT", "demo_out")
os.makedirs(out, exist_ok=True)
grid = default_grid()
x = grid.x

# %% [markdown]
# Invariance of the zeroth-order density in the profile coordinate x0 = x / s.

# %%
x0 = np.linspace(-9.5, 9.5, 20)
state = Sinc(1.0)
rows = []
for t in (0.0, 1.0, 5.0):
    s = factor_coeffs(1.0, t).s
    rows.append(s * np.abs(psi0_at(state, 1.0, t, s * x0)) ** 2)
print("largest spread across t:", np.ptp(np.array(rows), axis=0).max())

# %% [markdown]
# Exact evolution (a box integral in k done by Gauss-Legendre) against psi0,
# psi1 and the independent FFT oracle.

# %%
fig, axes = plt.subplots(1, 2, figsize=(10, 3.5))
for ax, alpha in zip(axes, (0.3, 3.0)):
    exact = sinc_exact(1.0, alpha, 5.0, grid).field
    p0 = sinc_psi0(1.0, alpha, 5.0, grid).field
    p1 = sinc_psi1(1.0, alpha, 5.0, grid).field
    oracle = chirped_oracle(state, alpha, 5.0, grid).field
    print(f"alpha={alpha}: psi0 {rel_l2_error(p0, exact):.3e}  psi1 {rel_l2_error(p1, exact):.3e}"
          f"  exact vs oracle {rel_l2_error(exact, oracle):.1e}"
          f"  |psi1-psi0|/|psi0| {l2_norm(p1 - p0) / l2_norm(p0):.3f}")
    ax.plot(x, density(exact), label="exact")
    ax.plot(x, density(p0), "--", label="psi0")
    ax.set_title(f"alpha = {alpha:g}, t = 5")
    ax.set_xlim(-80, 80)
    ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(out, "sinc.png"), dpi=120)
