"""Uniform 1-D grids, sampled complex wave fields and the error metrics
used to compare them.

Units are dimensionless with hbar = m = 1.  Grids are endpoint-exclusive
and carry the conjugate wavenumber lattice in FFT ordering.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Union

import numpy as np

__all__ = [
    "Grid",
    "WaveField",
    "make_grid",
    "sample",
    "l2_norm",
    "density",
    "rel_l2_error",
    "write_field_csv",
    "read_field_csv",
    "DEFAULT_N",
    "DEFAULT_X_MIN",
    "DEFAULT_X_MAX",
    "default_grid",
]

DEFAULT_N = 8192
DEFAULT_X_MIN = -80.0
DEFAULT_X_MAX = 80.0


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic lattice ``x_j = x_min + j*dx``, ``j = 0..n-1``."""

    n: int
    x_min: float
    x_max: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not _is_power_of_two(int(self.n)):
            raise ValueError(f"n must be a power of two >= 2, got {self.n!r}")
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValueError("grid endpoints must be finite")
        if not self.x_max > self.x_min:
            raise ValueError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n

    @cached_property
    def x(self) -> np.ndarray:
        x = self.x_min + np.arange(self.n) * self.dx
        x.flags.writeable = False
        return x

    @cached_property
    def k(self) -> np.ndarray:
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        k.flags.writeable = False
        return k

    @property
    def k_nyquist(self) -> float:
        return np.pi / self.dx

    def to_dict(self) -> dict:
        return {"n": self.n, "x_min": self.x_min, "x_max": self.x_max}


def make_grid(n: int, x_min: float, x_max: float) -> Grid:
    return Grid(n, x_min, x_max)


def default_grid() -> Grid:
    return Grid(DEFAULT_N, DEFAULT_X_MIN, DEFAULT_X_MAX)


@dataclass(frozen=True, eq=False)
class WaveField:
    """Complex samples of a wavefunction on a :class:`Grid`.

    ``coverage`` is the fraction of samples that came from inside the source
    domain; it is below one only for fields produced by resampling.
    """

    grid: Grid
    values: np.ndarray
    coverage: float = 1.0

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != (self.grid.n,):
            raise ValueError(
                f"expected {self.grid.n} samples, got array of shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("wave field contains NaN or Inf samples")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def density(self) -> np.ndarray:
        return density(self)

    def l2_norm(self) -> float:
        return l2_norm(self)

    def with_values(self, values) -> "WaveField":
        return WaveField(self.grid, values)

    def __add__(self, other: "WaveField") -> "WaveField":
        _check_same_grid(self, other)
        return WaveField(self.grid, self.values + other.values)

    def __sub__(self, other: "WaveField") -> "WaveField":
        _check_same_grid(self, other)
        return WaveField(self.grid, self.values - other.values)

    def __mul__(self, c) -> "WaveField":
        return WaveField(self.grid, self.values * c)

    __rmul__ = __mul__


def sample(state: Callable[[np.ndarray], np.ndarray], grid: Grid) -> WaveField:
    """Evaluate an initial state (any callable of x) on the grid nodes."""
    return WaveField(grid, state(grid.x))


def l2_norm(f: WaveField) -> float:
    return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * f.grid.dx))


def density(f: WaveField) -> np.ndarray:
    return np.abs(f.values) ** 2


def _check_same_grid(a: WaveField, b: WaveField) -> None:
    if a.grid != b.grid:
        raise ValueError(f"grid mismatch: {a.grid} vs {b.grid}")


def rel_l2_error(a: WaveField, b: WaveField) -> float:
    """``||a - b|| / ||b||`` with ``b`` the reference."""
    _check_same_grid(a, b)
    ref = l2_norm(b)
    if ref == 0.0:
        raise ValueError("reference field has zero norm")
    return l2_norm(a - b) / ref


PathLike = Union[str, Path]


def write_field_csv(f: WaveField, path: PathLike) -> Path:
    """Dump a field as ``x, re, im, density`` rows (repr-exact floats)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rho = density(f)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "re", "im", "density"])
        for x, v, d in zip(f.grid.x, f.values, rho):
            writer.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag)), repr(float(d))])
    return path


def read_field_csv(path: PathLike) -> WaveField:
    """Inverse of :func:`write_field_csv`; the grid is rebuilt from the x column."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    x = data[:, 0]
    n = len(x)
    dx = x[1] - x[0]
    grid = Grid(n, x[0], x[0] + n * dx)
    return WaveField(grid, data[:, 1] + 1j * data[:, 2])
