"""Free-particle evolution paths.

Reference paths
    ``spectral_free_step``   exp(-i t p^2 / 2) applied in Fourier space.
    ``chirped_oracle``       chirp by alpha, then ``spectral_free_step`` on an
                             automatically sized working grid.
    closed forms             Airy, Airy-Gauss, Gaussian, Sinc, Bessel.

Approximants
    ``psi0`` / ``psi1_generic`` and the Sinc / Bessel specializations.

Profiles that are not localized (Sinc, Bessel, Airy) are tapered with a
smooth erfc window well outside the region whose rays reach the output
window, so that periodic wrap-around never contaminates the result.  A ray
leaving ``x0`` with wavenumber ``k`` after the chirp sits at
``s*x0 + t*k`` at time t, which fixes the radius that matters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import erfc

from .factorization import FactorCoeffs, apply_chirp, factor_coeffs, squeeze_scale_analytic
from .gridfield import Grid, WaveField, sample
from .specfun import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    airy_ai,
    gauss_legendre_integral,
    paper_sinc,
    paper_sinc_second_moment,
    theta_quadrature,
)
from .states import Airy, AiryGauss, Bessel, Gaussian, InitialState, Sinc

__all__ = [
    "AliasingError",
    "EvolvedField",
    "spectral_tail_fraction",
    "spectral_free_step",
    "chirped_oracle",
    "factorized_propagation",
    "airy_exact",
    "airy_gauss_exact",
    "gaussian_exact",
    "psi0",
    "psi0_at",
    "psi1_generic",
    "sinc_psi0",
    "sinc_psi1",
    "sinc_exact",
    "sinc_psi1_quadrature",
    "bessel_psi0",
    "bessel_psi1",
    "bessel_psi1_printed",
    "bessel_exact",
    "bessel_first_order_expansion",
    "exact_evolution",
    "psi1",
    "TAPER_WIDTH",
]

TAPER_WIDTH = 1.0
ALIAS_TOL = 1e-8
MAX_WORKING_POINTS = 1 << 23
SINC_QUADRATURE = QuadratureSpec(panel_count=32, rule="gauss-legendre", order=8, abs_tol=1e-12)


class AliasingError(ArithmeticError):
    """The field is not resolved by the grid it lives on."""


@dataclass(frozen=True)
class EvolvedField:
    field: WaveField
    method: str
    coeffs: FactorCoeffs
    state: InitialState

    @property
    def alpha(self) -> float:
        return self.coeffs.alpha

    @property
    def t(self) -> float:
        return self.coeffs.t

    def to_report(self, errors: Optional[dict] = None) -> dict:
        c = self.coeffs
        return {
            "state": self.state.describe(),
            "alpha": c.alpha,
            "t": c.t,
            "method": self.method,
            "f1": c.f1,
            "f2": c.f2,
            "f3": c.f3,
            "f4": c.f4,
            "s": c.s,
            "errors": dict(errors or {}),
        }


# ---------------------------------------------------------------------------
# spectral machinery
# ---------------------------------------------------------------------------

def spectral_tail_fraction(values: np.ndarray, k: np.ndarray, top: float = 0.1) -> float:
    """Fraction of spectral power carried by the top ``top`` of the |k| range."""
    power = np.abs(np.fft.fft(values)) ** 2
    total = power.sum()
    if total == 0:
        return 0.0
    kmax = np.max(np.abs(k))
    return float(power[np.abs(k) > (1.0 - top) * kmax].sum() / total)


def _guard(values: np.ndarray, k: np.ndarray, what: str) -> None:
    tail = spectral_tail_fraction(values, k)
    if tail > ALIAS_TOL:
        raise AliasingError(
            f"{what}: spectral power fraction {tail:.3g} near Nyquist exceeds {ALIAS_TOL:g}"
        )


def spectral_free_step(f: WaveField, t: float) -> WaveField:
    """Exact free evolution of the periodic band-limited interpolant of ``f``."""
    if t == 0:
        return WaveField(f.grid, f.values)
    spec = np.fft.fft(f.values)
    power = np.abs(spec) ** 2
    k = f.grid.k
    total = power.sum()
    if total > 0:
        tail = power[np.abs(k) > 0.9 * np.max(np.abs(k))].sum() / total
        if tail > ALIAS_TOL:
            raise AliasingError(
                f"free step: spectral power fraction {tail:.3g} near Nyquist exceeds {ALIAS_TOL:g}"
            )
    return WaveField(f.grid, np.fft.ifft(spec * np.exp(-0.5j * t * k**2)))


def _taper(x: np.ndarray, center: float, width: float) -> np.ndarray:
    return 0.5 * erfc((np.abs(x) - center) / width)


@dataclass(frozen=True)
class _Window:
    """Apodization of phi: unity well past ``ray_radius``, zero by ``support``."""

    ray_radius: float
    center: float
    support: float
    k_bound: float
    width: float = TAPER_WIDTH

    def __call__(self, x):
        return _taper(x, self.center, self.width)


def _window_for(state: InitialState, reach: float, tau: float) -> _Window:
    """Taper for a profile whose values on ``|y| <= reach`` are propagated for
    time ``tau``.  The wavenumber bound includes the taper's own spectrum."""
    w = TAPER_WIDTH
    radius = reach
    for _ in range(50):
        k = state.wavenumber_bound(radius + 13.0 * w) + 10.0 / w
        new = reach + tau * k + 4.0 * w
        if abs(new - radius) < 1e-9 * (1.0 + radius):
            break
        radius = new
    center = radius + 6.5 * w
    support = min(center + 6.5 * w, state.support_radius)
    k = state.wavenumber_bound(support) + 10.0 / w
    return _Window(radius, center, support, k)


def _aligned_grid(origin: float, step: float, n_out: int, half_width: float, k_needed: float):
    """Working grid for output nodes ``origin + j*step`` (j < n_out).

    The spacing is ``step * 2**q`` for the largest integer q (possibly
    negative) that keeps ``k_needed`` below 80% of Nyquist.  The domain covers
    ``[-half_width, half_width]`` and the output nodes.  Returns
    ``(grid, offset, stride, upsample)``: after Fourier upsampling by
    ``upsample``, output node j sits at index ``offset + j*stride``.
    """
    h = step
    while math.pi / h * 0.8 < k_needed:
        h /= 2.0
    while math.pi / (2.0 * h) * 0.8 >= k_needed:
        h *= 2.0
    stride = max(1, int(round(step / h)))
    upsample = max(1, int(round(h / step)))
    out_last = origin + (n_out - 1) * step
    left = min(-half_width, origin)
    right = max(half_width, out_last + step)
    m = int(math.ceil((origin - left) / h))
    count = m + int(math.ceil((right - origin) / h)) + 1
    n = 1 << max(1, (count - 1).bit_length())
    if n * upsample > MAX_WORKING_POINTS:
        raise AliasingError(f"working grid would need {n * upsample} points (limit {MAX_WORKING_POINTS})")
    x0 = origin - m * h
    return Grid(n, x0, x0 + n * h), m * upsample, stride, upsample


def _fourier_upsample(values: np.ndarray, factor: int) -> np.ndarray:
    """Trigonometric interpolation onto a grid ``factor`` times finer."""
    if factor == 1:
        return values
    n = len(values)
    spec = np.fft.fft(values)
    padded = np.zeros(n * factor, dtype=complex)
    half = n // 2
    padded[:half] = spec[:half]
    padded[-half + 1:] = spec[half + 1:]
    padded[half] = 0.5 * spec[half]
    padded[-half] = 0.5 * spec[half]
    return np.fft.ifft(padded) * factor


def _extract(values, offset, stride, upsample, n_out):
    fine = _fourier_upsample(values, upsample)
    return fine[offset: offset + n_out * stride: stride]


def _reach(grid: Grid) -> float:
    return max(abs(grid.x_min), abs(grid.x_max))


# ---------------------------------------------------------------------------
# oracle and factorized pipeline
# ---------------------------------------------------------------------------

def chirped_oracle(state: InitialState, alpha: float, t: float, grid: Grid) -> EvolvedField:
    """``exp(-i t p^2/2) [exp(i alpha x^2) phi]`` evaluated on ``grid``.

    Computed on a private working grid that resolves the chirp over the
    initial support and holds every ray until time t; the output grid only
    needs to resolve the evolved field.
    """
    coeffs = factor_coeffs(alpha, t)
    if t == 0:
        return EvolvedField(apply_chirp(sample(state, grid), alpha), "oracle", coeffs, state)
    s = coeffs.s
    win = _window_for(state, _reach(grid) / s, t / s)
    k_work = 2.0 * abs(alpha) * win.support + win.k_bound
    half = s * win.support + t * win.k_bound + 4.0 * TAPER_WIDTH * s
    work, offset, stride, up = _aligned_grid(grid.x_min, grid.dx, grid.n, half, k_work)
    x = work.x
    vals = np.zeros(work.n, dtype=complex)
    live = np.abs(x) <= win.support
    vals[live] = state(x[live]) * win(x[live]) * np.exp(1j * alpha * x[live] ** 2)
    evolved = spectral_free_step(WaveField(work, vals), t)
    out = _extract(evolved.values, offset, stride, up, grid.n)
    return EvolvedField(WaveField(grid, out), "oracle", coeffs, state)


def _profile_samples(state: InitialState, coeffs: FactorCoeffs, grid: Grid):
    """Tapered phi on a fine grid containing the preimages ``x_j / s``.

    Returns ``(profile_grid, values, offset, stride, upsample)``.
    """
    s = coeffs.s
    tau = abs(2.0 * coeffs.f4)
    win = _window_for(state, _reach(grid) / s, tau)
    half = win.support + tau * win.k_bound + 4.0 * TAPER_WIDTH
    prof, offset, stride, up = _aligned_grid(grid.x_min / s, grid.dx / s, grid.n, half, win.k_bound)
    y = prof.x
    vals = np.zeros(prof.n, dtype=complex)
    live = np.abs(y) <= win.support
    vals[live] = state(y[live]) * win(y[live])
    return prof, vals, offset, stride, up


def _finish(coeffs: FactorCoeffs, grid: Grid, profile_values: np.ndarray) -> WaveField:
    """Squeeze (values already at x/s) and chirp by f1."""
    f = WaveField(grid, profile_values / math.sqrt(coeffs.s))
    return apply_chirp(f, coeffs.f1)


def factorized_propagation(state: InitialState, alpha: float, t: float, grid: Grid) -> EvolvedField:
    """chirp(f1) . squeeze(s) . exp(i f4 p^2) applied to phi (no approximation)."""
    coeffs = factor_coeffs(alpha, t)
    prof, vals, offset, stride, up = _profile_samples(state, coeffs, grid)
    _guard(vals, prof.k, "residual propagation")
    if coeffs.f4 != 0:
        vals = np.fft.ifft(np.fft.fft(vals) * np.exp(1j * coeffs.f4 * prof.k**2))
    out = _extract(vals, offset, stride, up, grid.n)
    return EvolvedField(_finish(coeffs, grid, out), "factorized", coeffs, state)


# ---------------------------------------------------------------------------
# generic approximants
# ---------------------------------------------------------------------------

def psi0_at(state: InitialState, alpha: float, t: float, x) -> np.ndarray:
    """Zeroth-order approximant at arbitrary points."""
    c = factor_coeffs(alpha, t)
    x = np.asarray(x, dtype=float)
    return np.exp(1j * c.f1 * x**2) * np.asarray(state(x / c.s)) / math.sqrt(c.s)


def psi0(state: InitialState, alpha: float, t: float, grid: Grid) -> EvolvedField:
    coeffs = factor_coeffs(alpha, t)
    field = apply_chirp(squeeze_scale_analytic(state, coeffs.s, grid), coeffs.f1)
    return EvolvedField(field, "psi0", coeffs, state)


def psi1_generic(state: InitialState, alpha: float, t: float, grid: Grid) -> EvolvedField:
    """First-order approximant with ``p^2 phi`` from a spectral derivative of
    the (unsqueezed) profile."""
    coeffs = factor_coeffs(alpha, t)
    prof, vals, offset, stride, up = _profile_samples(state, coeffs, grid)
    _guard(vals, prof.k, "profile derivative")
    p2 = np.fft.ifft(np.fft.fft(vals) * prof.k**2)
    first = vals + 1j * coeffs.f4 * p2
    out = _extract(first, offset, stride, up, grid.n)
    return EvolvedField(_finish(coeffs, grid, out), "psi1", coeffs, state)


# ---------------------------------------------------------------------------
# Airy family
# ---------------------------------------------------------------------------

def airy_exact(eps: float, t: float, grid: Grid) -> WaveField:
    """Non-spreading accelerating Airy packet."""
    x = grid.x
    e3 = eps**3
    values = airy_ai(eps * (x - e3 * t * t / 4.0)) * np.exp(0.5j * e3 * t * (x - e3 * t * t / 6.0))
    return WaveField(grid, values)


def airy_gauss_exact(eps: float, beta: float, t: float, grid: Grid) -> WaveField:
    """Free evolution of ``Ai(eps x) exp(-beta x^2)``.

    With ``D = 1 + 2 i beta t``::

        psi = D^(-1/2) Ai(eps x / D - eps^4 t^2 / (4 D^2)) exp(-beta x^2 / D)
              * exp(i [eps^3 t x / (2 D^2) - eps^6 t^3 / (12 D^3)])

    which reduces to the plain Airy packet at beta = 0.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    x = grid.x
    d = 1.0 + 2j * beta * t
    zeta = eps * x / d - eps**4 * t * t / (4.0 * d * d)
    gamma = eps**3 * t * x / (2.0 * d * d) - eps**6 * t**3 / (12.0 * d**3)
    with np.errstate(under="ignore"):
        values = airy_ai(zeta) * np.exp(-beta * x**2 / d + 1j * gamma) / np.sqrt(d)
    return WaveField(grid, values)


def gaussian_exact(sigma: float, alpha: float, t: float, grid: Grid) -> WaveField:
    """Free evolution of ``exp(i alpha x^2 - x^2 / (2 sigma^2))``."""
    a = 1.0 / (2.0 * sigma**2) - 1j * alpha
    d = 1.0 + 2j * a * t
    with np.errstate(under="ignore"):
        values = np.exp(-a * grid.x**2 / d) / np.sqrt(d)
    return WaveField(grid, values)


# ---------------------------------------------------------------------------
# Sinc family
# ---------------------------------------------------------------------------

def _sinc_prefactor(coeffs: FactorCoeffs, x: np.ndarray) -> np.ndarray:
    return np.exp(1j * coeffs.f1 * x**2) / math.sqrt(coeffs.s)


def sinc_psi0(b: float, alpha: float, t: float, grid: Grid) -> EvolvedField:
    coeffs = factor_coeffs(alpha, t)
    x = grid.x
    values = _sinc_prefactor(coeffs, x) * paper_sinc(b, x / coeffs.s)
    return EvolvedField(WaveField(grid, values), "psi0", coeffs, Sinc(b))


def sinc_psi1(b: float, alpha: float, t: float, grid: Grid) -> EvolvedField:
    """psi0 plus ``i f4`` times the second spectral moment of the box."""
    coeffs = factor_coeffs(alpha, t)
    x = grid.x
    y = x / coeffs.s
    kernel = paper_sinc(b, y) + 1j * coeffs.f4 * paper_sinc_second_moment(b, y)
    return EvolvedField(WaveField(grid, _sinc_prefactor(coeffs, x) * kernel), "psi1", coeffs, Sinc(b))


def _box_integral(b, y, weight, quad):
    return gauss_legendre_integral(lambda u: weight(u)[None, :] * np.exp(1j * np.outer(y, u)), -b, b, quad)


def sinc_psi1_quadrature(b: float, alpha: float, t: float, grid: Grid,
                         quad: QuadratureSpec = SINC_QUADRATURE) -> EvolvedField:
    """Cross-check of :func:`sinc_psi1` with the box integral done numerically."""
    coeffs = factor_coeffs(alpha, t)
    x = grid.x
    integral = _box_integral(b, x / coeffs.s, lambda u: 1.0 + 1j * coeffs.f4 * u**2, quad)
    values = _sinc_prefactor(coeffs, x) * integral / b
    return EvolvedField(WaveField(grid, values), "psi1", coeffs, Sinc(b))


def sinc_exact(b: float, alpha: float, t: float, grid: Grid,
               quad: QuadratureSpec = SINC_QUADRATURE) -> EvolvedField:
    coeffs = factor_coeffs(alpha, t)
    x = grid.x
    integral = _box_integral(b, x / coeffs.s, lambda u: np.exp(1j * coeffs.f4 * u**2), quad)
    values = _sinc_prefactor(coeffs, x) * integral / b
    return EvolvedField(WaveField(grid, values), "exact_closed_form", coeffs, Sinc(b))


# ---------------------------------------------------------------------------
# Bessel family
# ---------------------------------------------------------------------------

def _bessel_values(n: int, y: np.ndarray, quad: QuadratureSpec) -> np.ndarray:
    values = theta_quadrature(n, y, 0.0, quad)
    return values.real


def bessel_psi0(n: int, alpha: float, t: float, grid: Grid,
                quad: QuadratureSpec = DEFAULT_QUADRATURE) -> EvolvedField:
    coeffs = factor_coeffs(alpha, t)
    x = grid.x
    values = _sinc_prefactor(coeffs, x) * _bessel_values(n, x / coeffs.s, quad)
    return EvolvedField(WaveField(grid, values), "psi0", coeffs, Bessel(n, quad))


def _bessel_psi1(n, alpha, t, grid, quad, center_coeff):
    coeffs = factor_coeffs(alpha, t)
    x = grid.x
    y = x / coeffs.s
    f4 = coeffs.f4
    jn = _bessel_values(n, y, quad)
    side = _bessel_values(n + 2, y, quad) + _bessel_values(n - 2, y, quad)
    kernel = center_coeff(f4) * jn - 1j * (f4 / 4.0) * side
    return EvolvedField(WaveField(grid, _sinc_prefactor(coeffs, x) * kernel), "psi1", coeffs, Bessel(n, quad))


def bessel_psi1(n: int, alpha: float, t: float, grid: Grid,
                quad: QuadratureSpec = DEFAULT_QUADRATURE) -> EvolvedField:
    """``[(1 + i f4/2) J_n - i (f4/4)(J_{n+2} + J_{n-2})](x/s)`` with chirp and
    squeeze prefactor, from ``J_n'' = (J_{n-2} - 2 J_n + J_{n+2}) / 4``."""
    return _bessel_psi1(n, alpha, t, grid, quad, lambda f4: 1.0 + 0.5j * f4)


def bessel_psi1_printed(n: int, alpha: float, t: float, grid: Grid,
                        quad: QuadratureSpec = DEFAULT_QUADRATURE) -> EvolvedField:
    """Variant with a real ``(1 + f4/2)`` coefficient on ``J_n``; kept only to
    show that it disagrees with the spectral first-order result."""
    return _bessel_psi1(n, alpha, t, grid, quad, lambda f4: 1.0 + 0.5 * f4)


def bessel_exact(n: int, alpha: float, t: float, grid: Grid,
                 quad: QuadratureSpec = DEFAULT_QUADRATURE) -> EvolvedField:
    """Chirp and squeeze of the generalized Bessel function ``G_n(x/s, f4)``."""
    coeffs = factor_coeffs(alpha, t)
    x = grid.x
    g = theta_quadrature(n, x / coeffs.s, coeffs.f4, quad)
    return EvolvedField(WaveField(grid, _sinc_prefactor(coeffs, x) * g), "exact_closed_form",
                        coeffs, Bessel(n, quad))


def bessel_first_order_expansion(n: int, alpha: float, t: float, grid: Grid,
                                 quad: QuadratureSpec = DEFAULT_QUADRATURE) -> EvolvedField:
    """Exact theta integral with ``exp(i f4 sin^2)`` replaced by ``1 + i f4 sin^2``,
    evaluated by quadrature (no Bessel identities involved)."""
    coeffs = factor_coeffs(alpha, t)
    x = grid.x
    y = x / coeffs.s
    g = theta_quadrature(n, y, 0.0, quad) + 1j * coeffs.f4 * theta_quadrature(n, y, 0.0, quad, sin2_power=1)
    return EvolvedField(WaveField(grid, _sinc_prefactor(coeffs, x) * g), "psi1", coeffs, Bessel(n, quad))


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def exact_evolution(state: InitialState, alpha: float, t: float, grid: Grid,
                    quad: QuadratureSpec = DEFAULT_QUADRATURE) -> Optional[EvolvedField]:
    """Closed-form evolution when one exists for ``(state, alpha)``, else None."""
    coeffs = factor_coeffs(alpha, t)
    if isinstance(state, Sinc):
        return sinc_exact(state.b, alpha, t, grid)
    if isinstance(state, Bessel):
        return bessel_exact(state.n, alpha, t, grid, quad)
    if isinstance(state, Gaussian):
        f = gaussian_exact(state.sigma, alpha, t, grid)
        return EvolvedField(f, "exact_closed_form", coeffs, state)
    if isinstance(state, AiryGauss) and alpha == 0:
        f = airy_gauss_exact(state.eps, state.beta, t, grid)
        return EvolvedField(f, "exact_closed_form", coeffs, state)
    if isinstance(state, Airy) and alpha == 0:
        return EvolvedField(airy_exact(state.eps, t, grid), "exact_closed_form", coeffs, state)
    return None


def psi1(state: InitialState, alpha: float, t: float, grid: Grid,
         quad: QuadratureSpec = DEFAULT_QUADRATURE) -> EvolvedField:
    """First-order approximant, closed form where available."""
    if isinstance(state, Sinc):
        return sinc_psi1(state.b, alpha, t, grid)
    if isinstance(state, Bessel):
        return bessel_psi1(state.n, alpha, t, grid, quad)
    return psi1_generic(state, alpha, t, grid)
