# coding: utf-8

# # The residual free-propagation coefficient f4
#
# After pulling a chirp and a squeeze out of the evolution operator, what is
# left is a free step of "duration" -2 f4 = t / (1 + 2 alpha t).  For a strong
# chirp this saturates at 1/(2 alpha), which is why the squeeze picture gets
# better as alpha grows.

# %%
import os

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from chirpwave import factor_coeffs, f4_asymptotics, f4_sweep

out = os.environ.get("DEMO_OUT", "demo_out")
os.makedirs(out, exist_ok=True)

# %%
times = np.linspace(0.0, 5.0, 500)
fig, ax = plt.subplots(figsize=(6, 3.5))
for alpha, style in ((10.0, ":"), (5.0, "--"), (0.5, "-")):
    rows = f4_sweep(alpha, times)
    ax.plot(rows[:, 0], rows[:, 1], style, label=f"alpha = {alpha:g}")
    print(f"alpha={alpha:>4}: f4(5) = {rows[-1, 1]:+.5f}   -1/(4 alpha) = {-0.25 / alpha:+.5f}")
ax.set_xlabel("t")
ax.set_ylabel("f4")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(out, "f4.png"), dpi=120)

# %% [markdown]
# Both series, compared with the exact value.  The small-alpha series error
# shrinks like alpha^3, the large-alpha one like 1/alpha^3.

# %%
for alpha in (0.001, 0.01, 0.02):
    small, _ = f4_asymptotics(alpha, 1.0)
    print(f"small alpha={alpha:<6} error {abs(factor_coeffs(alpha, 1.0).f4 - small):.2e}")
for alpha in (5.0, 10.0, 50.0):
    _, large = f4_asymptotics(alpha, 5.0)
    print(f"large alpha={alpha:<6} error {abs(factor_coeffs(alpha, 5.0).f4 - large):.2e}")

# %% [markdown]
# The squeeze factor s and the coefficient f2 are tied by exp(-2 f2) = s.

# %%
c = factor_coeffs(3.0, 5.0)
print(c)
print("exp(-2 f2) / s =", np.exp(-2 * c.f2) / c.s)
