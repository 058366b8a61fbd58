"""Coefficients of the chirp / squeeze / residual-propagation factorization.

For an initial state ``exp(i alpha x^2) phi(x)`` evolved freely for time t,

    psi(x, t) = exp(i f1 x^2) exp(i f2 (x p + p x)) exp(i f4 p^2) phi(x)

with ``s = 1 + 2 alpha t``, ``f1 = alpha / s``, ``f2 = -ln(s) / 2``,
``f3 = alpha t^2 / s`` and ``f4 = f3 - t / 2``.  The middle factor is the
squeeze ``phi(x) -> phi(x / s) / sqrt(s)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .gridfield import Grid, WaveField

__all__ = [
    "FactorCoeffs",
    "factor_coeffs",
    "f4_asymptotics",
    "f4_sweep",
    "write_f4_sweep_csv",
    "apply_chirp",
    "squeeze_scale_analytic",
    "squeeze_scale_sampled",
]


@dataclass(frozen=True)
class FactorCoeffs:
    alpha: float
    t: float
    f1: float
    f2: float
    f3: float
    f4: float
    s: float

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("alpha", "t", "f1", "f2", "f3", "f4", "s")}


def factor_coeffs(alpha: float, t: float) -> FactorCoeffs:
    s = 1.0 + 2.0 * alpha * t
    if not s > 0:
        raise ValueError(f"1 + 2*alpha*t must be positive (alpha={alpha}, t={t})")
    f3 = alpha * t * t / s
    return FactorCoeffs(
        alpha=float(alpha),
        t=float(t),
        f1=alpha / s,
        f2=-0.5 * math.log(s),
        f3=f3,
        f4=f3 - t / 2.0,
        s=s,
    )


def f4_asymptotics(alpha: float, t: float) -> tuple[float, float]:
    """Truncated small-alpha and large-alpha series of f4.

    Returns ``(-t/2 + t^2 a - 2 t^3 a^2, -1/(4a) + 1/(8 t a^2))``; the large-alpha
    branch is ``nan`` when alpha is zero.
    """
    small = -t / 2.0 + t * t * alpha - 2.0 * t**3 * alpha**2
    if alpha == 0:
        large = math.nan
    else:
        large = -1.0 / (4.0 * alpha) + 1.0 / (8.0 * t * alpha**2)
    return small, large


def f4_sweep(alpha: float, times) -> np.ndarray:
    """Rows ``(t, f4_exact, f4_small_alpha, f4_large_alpha)``.

    The large-alpha series is singular at t = 0 and is reported as nan there.
    """
    rows = []
    for t in np.asarray(times, dtype=float):
        exact = factor_coeffs(alpha, t).f4
        if t > 0:
            small, large = f4_asymptotics(alpha, t)
        else:
            small, large = 0.0, math.nan
        rows.append((t, exact, small, large))
    return np.array(rows)


def write_f4_sweep_csv(rows: np.ndarray, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "f4_exact", "f4_small_alpha", "f4_large_alpha"])
        for row in rows:
            w.writerow([repr(float(v)) for v in row])
    return path


def apply_chirp(f: WaveField, c: float) -> WaveField:
    """Multiply by ``exp(i c x^2)``."""
    if c == 0:
        return WaveField(f.grid, f.values)
    return WaveField(f.grid, f.values * np.exp(1j * c * f.grid.x**2))


def squeeze_scale_analytic(state, s: float, grid: Grid) -> WaveField:
    """``phi(x / s) / sqrt(s)`` with phi evaluated directly."""
    if not s > 0:
        raise ValueError("squeeze factor must be positive")
    x = grid.x if s == 1 else grid.x / s
    return WaveField(grid, np.asarray(state(x)) / math.sqrt(s))


def squeeze_scale_sampled(f: WaveField, s: float) -> WaveField:
    """Squeeze a sampled field by cubic-spline interpolation.

    Points whose preimage ``x / s`` falls outside the sampled interval are set
    to zero; the returned field's ``coverage`` is the fraction that fell inside.
    Preimages landing exactly on a node reuse the stored sample.
    """
    if not s > 0:
        raise ValueError("squeeze factor must be positive")
    grid = f.grid
    xq = grid.x / s
    pos = (xq - grid.x_min) / grid.dx
    inside = (pos >= 0) & (pos <= grid.n - 1)
    out = np.zeros(grid.n, dtype=complex)
    on_node = inside & (pos == np.round(pos))
    out[on_node] = f.values[np.round(pos[on_node]).astype(int)]
    interp = inside & ~on_node
    if interp.any():
        re = CubicSpline(grid.x, f.values.real)
        im = CubicSpline(grid.x, f.values.imag)
        out[interp] = re(xq[interp]) + 1j * im(xq[interp])
    coverage = float(np.count_nonzero(inside)) / grid.n
    return WaveField(grid, out / math.sqrt(s), coverage=coverage)
