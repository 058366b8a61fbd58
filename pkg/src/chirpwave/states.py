"""Initial profiles phi(x, 0).

Each state is a callable of x plus two pieces of metadata the propagators
need to size their working grids:

``wavenumber_bound(radius)``
    an upper estimate of the local wavenumber content of phi on
    ``|x| <= radius``;
``support_radius``
    radius outside which phi is negligible (``inf`` for profiles that are
    not localized, such as Sinc, Bessel and Airy).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy.interpolate import CubicSpline

from .gridfield import WaveField
from .specfun import DEFAULT_QUADRATURE, QuadratureSpec, airy_ai, bessel_jn, paper_sinc

__all__ = [
    "InitialState",
    "Airy",
    "AiryGauss",
    "Sinc",
    "Bessel",
    "Gaussian",
    "Tabulated",
    "parse_state",
]


class InitialState:
    kind: ClassVar[str] = "abstract"
    support_radius: float = math.inf

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    def wavenumber_bound(self, radius: float) -> float:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"kind": self.kind, "spec": self.describe()}


@dataclass(frozen=True)
class Airy(InitialState):
    eps: float = 1.0
    kind: ClassVar[str] = "airy"

    def __call__(self, x):
        return np.asarray(airy_ai(self.eps * np.asarray(x, dtype=float)), dtype=complex)

    def wavenumber_bound(self, radius):
        e = abs(self.eps)
        return e * math.sqrt(e * radius) + 4.0 * e

    def describe(self):
        return f"airy:{self.eps:g}"


@dataclass(frozen=True)
class AiryGauss(InitialState):
    eps: float = 1.0
    beta: float = 0.01
    kind: ClassVar[str] = "airygauss"

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive for an Airy-Gauss packet")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(under="ignore"):
            return np.asarray(airy_ai(self.eps * x), dtype=complex) * np.exp(-self.beta * x**2)

    @property
    def support_radius(self):
        # exp(-beta x^2) < 1e-18
        return math.sqrt(41.5 / self.beta)

    def wavenumber_bound(self, radius):
        r = min(radius, self.support_radius)
        e = abs(self.eps)
        return e * math.sqrt(e * r) + 4.0 * e + 8.0 * math.sqrt(self.beta)

    def describe(self):
        return f"airygauss:{self.eps:g},{self.beta:g}"


@dataclass(frozen=True)
class Sinc(InitialState):
    b: float = 1.0
    kind: ClassVar[str] = "sinc"

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("b must be positive")

    def __call__(self, x):
        return paper_sinc(self.b, x).astype(complex)

    def wavenumber_bound(self, radius):
        return self.b

    def describe(self):
        return f"sinc:{self.b:g}"


@dataclass(frozen=True)
class Bessel(InitialState):
    n: int = 0
    quad: QuadratureSpec = DEFAULT_QUADRATURE
    kind: ClassVar[str] = "bessel"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError("Bessel order must be a non-negative integer")

    def __call__(self, x):
        return np.asarray(bessel_jn(self.n, x, self.quad), dtype=complex)

    def wavenumber_bound(self, radius):
        return 1.0

    def describe(self):
        return f"bessel:{self.n:d}"


@dataclass(frozen=True)
class Gaussian(InitialState):
    """``exp(-x^2 / (2 sigma^2))``."""

    sigma: float = 1.0
    kind: ClassVar[str] = "gaussian"

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-(x**2) / (2.0 * self.sigma**2)).astype(complex)

    @property
    def support_radius(self):
        return 9.5 * self.sigma

    def wavenumber_bound(self, radius):
        return 9.5 / self.sigma

    def describe(self):
        return f"gaussian:{self.sigma:g}"


class Tabulated(InitialState):
    """A profile given by samples; cubic interpolation, zero outside the grid."""

    kind = "tabulated"

    def __init__(self, field: WaveField, mass_cutoff: float = 1e-14):
        self.field = field
        grid = field.grid
        xs = grid.x
        self._re = CubicSpline(xs, field.values.real)
        self._im = CubicSpline(xs, field.values.imag)
        self._lo, self._hi = xs[0], xs[-1]
        # smallest |k| carrying all but mass_cutoff of the spectral weight
        spec = np.abs(np.fft.fft(field.values)) ** 2
        order = np.argsort(np.abs(grid.k))
        tail = spec.sum() - np.cumsum(spec[order])
        idx = int(np.searchsorted(-tail, -mass_cutoff * spec.sum()))
        self._kmax = float(np.abs(grid.k)[order][min(idx, len(order) - 1)])
        self.support_radius = max(abs(grid.x_min), abs(grid.x_max))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self._lo) & (x <= self._hi)
        out = np.zeros(x.shape, dtype=complex)
        out[inside] = self._re(x[inside]) + 1j * self._im(x[inside])
        return out

    def wavenumber_bound(self, radius):
        return self._kmax

    def describe(self):
        g = self.field.grid
        return f"tabulated:n={g.n},x=[{g.x_min:g},{g.x_max:g})"


_STATE_RE = re.compile(r"^\s*([a-z]+)\s*:\s*(.+?)\s*$")


def parse_state(text: str) -> InitialState:
    """Parse ``airy:<eps>``, ``airygauss:<eps>,<beta>``, ``sinc:<b>``,
    ``bessel:<n>`` or ``gaussian:<sigma>``."""
    m = _STATE_RE.match(text.lower())
    if not m:
        raise ValueError(f"cannot parse state spec {text!r}")
    kind, args = m.group(1), [a.strip() for a in m.group(2).split(",")]
    try:
        if kind == "airy" and len(args) == 1:
            return Airy(float(args[0]))
        if kind == "airygauss" and len(args) == 2:
            return AiryGauss(float(args[0]), float(args[1]))
        if kind == "sinc" and len(args) == 1:
            return Sinc(float(args[0]))
        if kind == "bessel" and len(args) == 1:
            n = float(args[0])
            if n != int(n):
                raise ValueError("Bessel order must be an integer")
            return Bessel(int(n))
        if kind == "gaussian" and len(args) == 1:
            return Gaussian(float(args[0]))
    except ValueError as exc:
        raise ValueError(f"bad state spec {text!r}: {exc}") from None
    raise ValueError(f"unknown state spec {text!r}")
