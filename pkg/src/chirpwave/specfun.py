"""Special functions used to build and evolve the test states.

* ``airy_ai``: Maclaurin series inside a disk, asymptotic expansions outside;
  works for real and complex arguments.
* ``bessel_jn`` / ``generalized_bessel``: one periodic-trapezoid kernel over
  theta in [-pi, pi), so that the generalized function with ``c = 0`` is
  bit-identical to the ordinary one.
* ``paper_sinc``: ``(1/b) * integral_{-b}^{b} exp(iux) du = 2 sin(bx)/(bx)``,
  which is 2 at the origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "DEFAULT_QUADRATURE",
    "AIRY_SERIES_RADIUS",
    "airy_ai",
    "airy_ai_series",
    "airy_ai_asymptotic",
    "bessel_jn",
    "generalized_bessel",
    "theta_quadrature",
    "paper_sinc",
    "paper_sinc_second_moment",
    "gauss_legendre_integral",
]


class QuadratureError(ArithmeticError):
    """Raised when a quadrature fails to reach its tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite quadrature settings.

    ``rule`` is ``"trapezoid"`` (periodic integrands) or ``"gauss-legendre"``
    with ``order`` nodes per panel.  Panels double from ``panel_count`` until
    two successive estimates differ by less than ``abs_tol``.
    """

    panel_count: int = 512
    rule: str = "trapezoid"
    abs_tol: float = 1e-10
    order: int = 8
    max_panels: int = 2**16

    def __post_init__(self):
        if self.panel_count < 16:
            raise ValueError("panel_count must be at least 16")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.rule not in ("trapezoid", "gauss-legendre"):
            raise ValueError(f"unknown quadrature rule {self.rule!r}")
        if self.max_panels < self.panel_count:
            raise ValueError("max_panels must be >= panel_count")


DEFAULT_QUADRATURE = QuadratureSpec()

# ---------------------------------------------------------------------------
# Airy Ai
# ---------------------------------------------------------------------------

AIRY_SERIES_RADIUS = 7.0

_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)


def airy_ai_series(z):
    """Ai from the two Maclaurin series ``Ai = Ai(0) f(z) + Ai'(0) g(z)``."""
    z = np.asarray(z, dtype=np.complex128)
    z3 = z**3
    f_term = np.ones_like(z)
    g_term = z.copy()
    f = f_term.copy()
    g = g_term.copy()
    for k in range(1, 200):
        f_term = f_term * z3 / ((3 * k) * (3 * k - 1))
        g_term = g_term * z3 / ((3 * k + 1) * (3 * k))
        f += f_term
        g += g_term
        if np.all(np.abs(f_term) + np.abs(g_term) <= 1e-18 * (np.abs(f) + np.abs(g) + 1e-300)):
            break
    return _AI0 * f + _AIP0 * g


def _airy_u(kmax: int) -> np.ndarray:
    u = np.empty(kmax + 1)
    u[0] = 1.0
    for k in range(1, kmax + 1):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
    return u


_U = _airy_u(60)


def _truncated_sum(xi_inv, signs, stride, offset):
    """Sum ``signs[j] * u[stride*j+offset] * xi_inv**(stride*j+offset)`` up to
    the smallest term (optimal truncation), elementwise."""
    total = np.zeros_like(xi_inv)
    prev = np.full(xi_inv.shape, np.inf)
    active = np.ones(xi_inv.shape, dtype=bool)
    j = 0
    while True:
        m = stride * j + offset
        if m >= len(_U):
            break
        term = signs(j) * _U[m] * xi_inv**m
        mag = np.abs(term)
        active &= mag < prev
        if not active.any():
            break
        total = np.where(active, total + term, total)
        prev = np.where(active, mag, prev)
        j += 1
    return total


def airy_ai_asymptotic(z):
    """Large-|z| expansions: decaying form for Re z >= 0, oscillatory form
    (in ``w = -z``) otherwise."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty_like(z)
    right = z.real >= 0
    if right.any():
        zr = z[right]
        xi = (2.0 / 3.0) * zr**1.5
        s = _truncated_sum(1.0 / xi, lambda j: (-1.0) ** j, 1, 0)
        out[right] = np.exp(-xi) / (2.0 * np.sqrt(np.pi) * zr**0.25) * s
    left = ~right
    if left.any():
        w = -z[left]
        xi = (2.0 / 3.0) * w**1.5
        inv = 1.0 / xi
        even = _truncated_sum(inv, lambda j: (-1.0) ** j, 2, 0)
        odd = _truncated_sum(inv, lambda j: (-1.0) ** j, 2, 1)
        phase = xi - np.pi / 4.0
        out[left] = (np.cos(phase) * even + np.sin(phase) * odd) / (np.sqrt(np.pi) * w**0.25)
    return out


def airy_ai(x):
    """Airy function Ai for real or complex input (scalar or array).

    Real input gives real output.  Large positive arguments underflow to 0.
    Error is about 1e-11 absolute for ``|Ai| <= 1`` and 1e-9 relative where
    ``|Ai|`` grows; inside the decaying sector near ``|z| = 7`` the relative
    error degrades to ~1e-5 because ``Ai`` itself is ~1e-6 there.
    """
    arr = np.asarray(x)
    is_real = not np.iscomplexobj(arr)
    z = np.atleast_1d(arr).astype(np.complex128)
    out = np.empty_like(z)
    inner = np.abs(z) <= AIRY_SERIES_RADIUS
    if inner.any():
        out[inner] = airy_ai_series(z[inner])
    if (~inner).any():
        with np.errstate(under="ignore"):
            out[~inner] = airy_ai_asymptotic(z[~inner])
    if is_real:
        out = out.real
    if arr.ndim == 0:
        return out[0].item()
    return out.reshape(arr.shape)


# ---------------------------------------------------------------------------
# theta-integral kernel for Bessel and generalized Bessel functions
# ---------------------------------------------------------------------------

def _theta_sum(n, x, c, theta0, nodes, sin2_power=0, chunk=1 << 21):
    """Sum over ``th_j = theta0 + 2 pi j / nodes`` of
    ``sin^(2m) th * exp(i n th - i x sin th + i c sin^2 th)``.

    Nodes th and pi - th share sin th, so for an even node count the
    x-dependent exponential is only formed once per mirror pair.
    """
    theta = theta0 + 2.0 * np.pi * np.arange(nodes) / nodes
    sin_t = np.sin(theta)
    base = np.exp(1j * n * theta)
    if c != 0.0:
        base = base * np.exp(1j * c * sin_t**2)
    if sin2_power:
        base = base * sin_t ** (2 * sin2_power)
    if nodes % 2 == 0:
        r = int(round((np.pi - 2.0 * theta0) * nodes / (2.0 * np.pi)))
        j = np.arange(nodes)
        mirror = (r - j) % nodes
        keep = j <= mirror
        weight = np.where(j < mirror, base + base[mirror], base)[keep]
        sin_t = sin_t[keep]
    else:
        weight = base
    out = np.empty(x.shape, dtype=np.complex128)
    rows = max(1, chunk // len(sin_t))
    for start in range(0, len(x), rows):
        xs = x[start:start + rows]
        out[start:start + rows] = np.exp(-1j * np.outer(xs, sin_t)) @ weight
    return out


def theta_quadrature(
    n: int,
    x,
    c: float = 0.0,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    sin2_power: int = 0,
) -> np.ndarray:
    """``(1/2pi) * integral_{-pi}^{pi} exp(i n th) exp(-i x sin th) exp(i c sin^2 th) dth``.

    ``sin2_power = m`` inserts an extra ``sin(th)^(2m)`` weight.

    Periodic trapezoid with panel doubling (new nodes are the midpoints, so
    each refinement reuses the previous sum).  Raises ``QuadratureError`` if
    the change between refinements stays above ``quad.abs_tol``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(x)) or not math.isfinite(c):
        raise ValueError("arguments must be finite")
    panels = quad.panel_count
    total = _theta_sum(n, x, c, -np.pi, panels, sin2_power)
    estimate = total / panels
    while panels < quad.max_panels:
        total = total + _theta_sum(n, x, c, -np.pi + np.pi / panels, panels, sin2_power)
        panels *= 2
        refined = total / panels
        change = np.max(np.abs(refined - estimate))
        estimate = refined
        if change < quad.abs_tol:
            return estimate
    raise QuadratureError(
        f"theta quadrature did not converge to {quad.abs_tol:g} with {panels} panels "
        f"(n={n}, max|x|={np.max(np.abs(x)):g}, c={c:g})"
    )


def _scalar_or_array(template, values):
    if np.ndim(template) == 0:
        return values[0].item()
    return values.reshape(np.shape(template))


def bessel_jn(n: int, x, quad: QuadratureSpec = DEFAULT_QUADRATURE):
    """Integer-order Bessel function from its theta-integral representation.

    The imaginary part of the quadrature vanishes analytically; a residual
    above ``quad.abs_tol`` means the rule is under-resolved.
    """
    n = int(n)
    values = theta_quadrature(n, x, 0.0, quad)
    residual = np.max(np.abs(values.imag))
    if residual > quad.abs_tol:
        raise QuadratureError(f"J_{n}: residual imaginary part {residual:g} exceeds tolerance")
    return _scalar_or_array(x, values.real)


def generalized_bessel(n: int, x, c: float, quad: QuadratureSpec = DEFAULT_QUADRATURE):
    """Generalized Bessel function with an extra ``exp(i c sin^2 th)`` weight."""
    values = theta_quadrature(int(n), x, float(c), quad)
    return _scalar_or_array(x, values)


# ---------------------------------------------------------------------------
# sinc family
# ---------------------------------------------------------------------------

def paper_sinc(b: float, x):
    """``2 sin(bx)/(bx)``, equal to 2 at x = 0."""
    if not b > 0:
        raise ValueError("b must be positive")
    return 2.0 * np.sinc(b * np.asarray(x, dtype=float) / np.pi)


def paper_sinc_second_moment(b: float, y):
    """``(1/b) * integral_{-b}^{b} u^2 exp(iuy) du`` in closed form.

    A Taylor series is used for ``|by| < 1`` where the closed form cancels.
    """
    if not b > 0:
        raise ValueError("b must be positive")
    y = np.asarray(y, dtype=float)
    by = b * y
    out = np.empty(np.shape(by))
    small = np.abs(by) < 1.0
    if np.any(~small):
        z = by[~small]
        # 2 b^2 [sin z / z + 2 cos z / z^2 - 2 sin z / z^3]
        out[~small] = 2.0 * b**2 * (np.sin(z) / z + 2.0 * np.cos(z) / z**2 - 2.0 * np.sin(z) / z**3)
    if np.any(small):
        z2 = by[small] ** 2
        acc = np.zeros_like(z2)
        term = np.ones_like(z2)
        for m in range(12):
            if m:
                term = term * (-z2) / ((2 * m - 1) * (2 * m))
            acc += term / (2 * m + 3)
        out[small] = 2.0 * b**2 * acc
    return out if out.ndim else float(out)


def gauss_legendre_integral(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    quad: QuadratureSpec,
) -> np.ndarray:
    """Composite Gauss-Legendre integral of a vector-valued integrand.

    ``func`` receives the node array ``u`` (shape ``(m,)``) and returns an
    array of shape ``(..., m)``; the last axis is integrated out.
    """
    nodes, weights = np.polynomial.legendre.leggauss(quad.order)

    def composite(panels: int):
        edges = np.linspace(a, b, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        u = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        w = (half[:, None] * weights[None, :]).ravel()
        return func(u) @ w

    panels = quad.panel_count
    estimate = composite(panels)
    while panels < quad.max_panels:
        panels *= 2
        refined = composite(panels)
        change = np.max(np.abs(refined - estimate))
        estimate = refined
        if change < quad.abs_tol:
            return estimate
    raise QuadratureError(
        f"Gauss-Legendre quadrature did not converge to {quad.abs_tol:g} with {panels} panels"
    )
