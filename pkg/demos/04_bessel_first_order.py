# coding: utf-8

# # Bessel packets and the first-order correction
#
# For J_n the exact evolution is a generalized Bessel function, the theta
# integral of exp(i(n th - y sin th + c sin^2 th)) with y = x/s and c = f4.
# Expanding exp(i f4 sin^2) to first order and using
# J_n'' = (J_{n-2} - 2 J_n + J_{n+2}) / 4 gives the coefficient (1 + i f4/2) on
# J_n.  Three independent routes should agree.

# %%
import os

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from chirpwave import Bessel, default_grid, density, rel_l2_error
from chirpwave.propagators import (
    bessel_exact,
    bessel_first_order_expansion,
    bessel_psi0,
    bessel_psi1,
    bessel_psi1_printed,
    psi1_generic,
)

out = os.environ.get("DEMO_OUT", "demo_out")
os.makedirs(out, exist_ok=True)
grid = default_grid()
x = grid.x

# %%
a, t = 10.0, 5.0
spectral = psi1_generic(Bessel(0), a, t, grid).field
closed = bessel_psi1(0, a, t, grid).field
expansion = bessel_first_order_expansion(0, a, t, grid).field
print("spectral vs closed  ", rel_l2_error(spectral, closed))
print("closed vs expansion ", rel_l2_error(closed, expansion))
print("real coefficient    ", rel_l2_error(bessel_psi1_printed(0, a, t, grid).field, expansion))

# %% [markdown]
# Accuracy of psi0 and psi1 against the exact field for the three chirps.

# %%
fig, axes = plt.subplots(1, 3, figsize=(12, 3.3), sharey=True)
for ax, alpha in zip(axes, (10.0, 5.0, 0.5)):
    exact = bessel_exact(0, alpha, 5.0, grid).field
    p0 = bessel_psi0(0, alpha, 5.0, grid).field
    p1 = bessel_psi1(0, alpha, 5.0, grid).field
    print(f"alpha={alpha:>4}: psi0 {rel_l2_error(p0, exact):.3e}   psi1 {rel_l2_error(p1, exact):.3e}")
    ax.plot(x, density(exact), label="exact")
    ax.plot(x, density(p0), "--", label="psi0")
    ax.set_title(f"alpha = {alpha:g}")
    ax.set_xlim(-40, 40)
axes[0].legend()
fig.tight_layout()
fig.savefig(os.path.join(out, "bessel.png"), dpi=120)
