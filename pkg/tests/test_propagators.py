import math

import numpy as np
import pytest
from scipy import special

from chirpwave.factorization import apply_chirp, factor_coeffs
from chirpwave.gridfield import Grid, WaveField, density, l2_norm, rel_l2_error, sample
from chirpwave.propagators import (
    AliasingError,
    airy_exact,
    airy_gauss_exact,
    bessel_exact,
    bessel_psi0,
    bessel_psi1,
    chirped_oracle,
    exact_evolution,
    factorized_propagation,
    gaussian_exact,
    psi0,
    psi0_at,
    psi1,
    psi1_generic,
    sinc_exact,
    sinc_psi0,
    sinc_psi1,
    sinc_psi1_quadrature,
    spectral_free_step,
)
from chirpwave.specfun import airy_ai
from chirpwave.states import Airy, AiryGauss, Bessel, Gaussian, Sinc, Tabulated


# --- spectral free step ---

def test_free_step_identity_and_semigroup(grid):
    f = sample(AiryGauss(1.0, 0.01), grid)
    assert rel_l2_error(spectral_free_step(f, 0.0), f) <= 1e-14
    two = spectral_free_step(spectral_free_step(f, 0.75), 0.75)
    assert rel_l2_error(two, spectral_free_step(f, 1.5)) <= 1e-12


def test_free_step_gaussian_variance_doubles(grid):
    f = sample(Gaussian(1.0), grid)
    def variance(field):
        rho = density(field)
        return np.sum(grid.x**2 * rho) / np.sum(rho)
    # e^{-x^2/2}: density variance 1/2 at t=0 and 1 at t=1
    assert variance(spectral_free_step(f, 1.0)) / variance(f) == pytest.approx(2.0, rel=1e-6)


def test_free_step_guard_rejects_undersampled_field():
    g = Grid(64, -4.0, 4.0)
    noisy = WaveField(g, np.exp(1j * np.pi / g.dx * g.x))
    with pytest.raises(AliasingError):
        spectral_free_step(noisy, 1.0)


# --- chirped oracle ---

@pytest.mark.parametrize("state", [Sinc(1.0), Bessel(0), Gaussian(1.0), AiryGauss(1.0, 0.01)])
def test_oracle_at_t0(state, grid):
    start = sample(state, grid)
    assert np.array_equal(chirped_oracle(state, 2.0, 0.0, grid).field.values, apply_chirp(start, 2.0).values)
    assert np.array_equal(chirped_oracle(state, 0.0, 0.0, grid).field.values, start.values)


def test_oracle_sinc_single_lobe(grid):
    rho = density(chirped_oracle(Sinc(1.0), 3.0, 5.0, grid).field)
    s = factor_coeffs(3.0, 5.0).s
    assert s == 31.0
    assert abs(grid.x[np.argmax(rho)]) <= grid.dx
    # the main lobe now spans about [-s*pi, s*pi] and sits well inside the grid
    inner = np.abs(grid.x) < 0.5 * s * np.pi
    assert np.all(rho[inner] > 0.05 * rho.max())


def test_oracle_needs_too_large_grid():
    with pytest.raises(AliasingError):
        chirped_oracle(Sinc(500.0), 100.0, 100.0, Grid(8192, -80.0, 80.0))


@pytest.mark.parametrize("state", [Sinc(1.0), Bessel(0), Bessel(2), Gaussian(0.7)])
@pytest.mark.parametrize("alpha,t", [(0.3, 5.0), (10.0, 5.0), (0.0, 2.0)])
def test_closed_forms_match_oracle(state, alpha, t, grid):
    exact = exact_evolution(state, alpha, t, grid)
    oracle = chirped_oracle(state, alpha, t, grid)
    assert rel_l2_error(exact.field, oracle.field) <= 1e-10


def test_factorized_matches_oracle_for_tabulated_profile():
    g = Grid(1024, -20.0, 20.0)
    x = g.x
    tab = Tabulated(WaveField(g, np.exp(-x**2 / 2) * (1 + 0.5 * x) * np.exp(0.4j * x)))
    for alpha, t in ((0.5, 1.0), (3.0, 2.0)):
        err = rel_l2_error(factorized_propagation(tab, alpha, t, g).field, chirped_oracle(tab, alpha, t, g).field)
        assert err <= 1e-8


# --- Airy family ---

def test_airy_t0(grid):
    assert np.array_equal(airy_exact(1.3, 0.0, grid).values.real, airy_ai(1.3 * grid.x))


@pytest.mark.parametrize("x0", [-6.0, -1.0, 0.0, 2.0])
def test_airy_solves_schrodinger(x0):
    g = Grid(64, x0 - 1.0, x0 + 1.0)
    i, h, t, eps = 32, g.dx, 1.0, 1.0
    psi = lambda tt: airy_exact(eps, tt, g).values
    # five-point stencils in x and t
    p = psi(t)
    dxx = (-p[i + 2] + 16 * p[i + 1] - 30 * p[i] + 16 * p[i - 1] - p[i - 2]) / (12 * h * h)
    k = 1e-3
    dt = (-psi(t + 2 * k)[i] + 8 * psi(t + k)[i] - 8 * psi(t - k)[i] + psi(t - 2 * k)[i]) / (12 * k)
    assert abs(1j * dt + 0.5 * dxx) <= 1e-6


def test_airy_gauss_t0_and_spectral(grid):
    x = grid.x
    start = airy_gauss_exact(1.0, 0.01, 0.0, grid)
    assert np.allclose(start.values, airy_ai(x) * np.exp(-0.01 * x**2), rtol=0, atol=1e-15)
    err = rel_l2_error(airy_gauss_exact(1.0, 0.01, 1.0, grid), spectral_free_step(sample(AiryGauss(1.0, 0.01), grid), 1.0))
    assert err <= 1e-6


def test_airy_gauss_deforms(grid):
    r0 = density(airy_gauss_exact(1.0, 0.01, 0.0, grid))
    r2 = density(airy_gauss_exact(1.0, 0.01, 2.0, grid))
    assert r2.max() < r0.max()
    shifted = density(airy_gauss_exact(1.0, 0.01, 0.0, Grid(grid.n, grid.x_min - 1.0, grid.x_max - 1.0)))
    assert np.max(np.abs(r2 - shifted)) > 1e-3


# --- generic approximants ---

@pytest.mark.parametrize("state", [Sinc(1.0), Bessel(1), Gaussian(1.0)])
def test_psi0_properties(state, grid):
    assert np.array_equal(psi0(state, 2.0, 0.0, grid).field.values, apply_chirp(sample(state, grid), 2.0).values)
    c = factor_coeffs(0.7, 3.0)
    want = np.abs(state(grid.x / c.s)) ** 2 / c.s
    assert np.allclose(density(psi0(state, 0.7, 3.0, grid).field), want, rtol=1e-13, atol=1e-16)
    assert np.allclose(psi0_at(state, 0.7, 3.0, grid.x), psi0(state, 0.7, 3.0, grid).field.values, atol=1e-15)


def test_psi0_bessel_formula(grid):
    c = factor_coeffs(2.0, 1.5)
    want = np.exp(1j * c.f1 * grid.x**2) * special.jv(3, grid.x / c.s) / math.sqrt(c.s)
    assert np.max(np.abs(bessel_psi0(3, 2.0, 1.5, grid).field.values - want)) < 1e-12


def test_psi1_at_t0_equals_psi0(grid):
    for state in (Sinc(1.0), Bessel(0), Gaussian(2.0)):
        assert rel_l2_error(psi1_generic(state, 3.0, 0.0, grid).field, psi0(state, 3.0, 0.0, grid).field) <= 1e-12


@pytest.mark.parametrize("alpha", [0.3, 3.0])
def test_sinc_psi1_paths(alpha, grid):
    closed = sinc_psi1(1.0, alpha, 5.0, grid).field
    quad = sinc_psi1_quadrature(1.0, alpha, 5.0, grid).field
    spectral = psi1_generic(Sinc(1.0), alpha, 5.0, grid).field
    assert rel_l2_error(closed, quad) <= 1e-8
    assert rel_l2_error(spectral, quad) <= 1e-8


def test_bessel_psi1_matches_spectral(grid):
    spectral = psi1_generic(Bessel(0), 0.5, 5.0, grid).field
    assert rel_l2_error(bessel_psi1(0, 0.5, 5.0, grid).field, spectral) <= 1e-8


def test_gaussian_psi1_dispatch(grid):
    assert psi1(Gaussian(1.0), 1.0, 1.0, grid).method == "psi1"


# --- Sinc / Bessel exact ---

def test_sinc_exact_large_alpha_limit(grid):
    alpha, t, b = 100.0, 5.0, 1.0
    f4 = factor_coeffs(alpha, t).f4
    diff = rel_l2_error(sinc_psi0(b, alpha, t, grid).field, sinc_exact(b, alpha, t, grid).field)
    assert diff <= 4 * abs(f4) * b * b / 3


def test_sinc_panel_behaviour(grid):
    e03 = rel_l2_error(sinc_psi0(1.0, 0.3, 5.0, grid).field, sinc_exact(1.0, 0.3, 5.0, grid).field)
    e3 = rel_l2_error(sinc_psi0(1.0, 3.0, 5.0, grid).field, sinc_exact(1.0, 3.0, 5.0, grid).field)
    assert e3 < 0.05 and e3 < e03
    p0 = sinc_psi0(1.0, 0.3, 5.0, grid).field
    p1 = sinc_psi1(1.0, 0.3, 5.0, grid).field
    assert l2_norm(p1 - p0) < 0.5 * l2_norm(p0)


def test_bessel_paths_at_t0(grid):
    want = np.exp(1j * 0.8 * grid.x**2) * special.j0(grid.x)
    for f in (bessel_exact(0, 0.8, 0.0, grid), bessel_psi0(0, 0.8, 0.0, grid), bessel_psi1(0, 0.8, 0.0, grid)):
        assert np.max(np.abs(f.field.values - want)) < 1e-12


def test_bessel_exact_vs_oracle(grid):
    err = rel_l2_error(bessel_exact(0, 0.5, 5.0, grid).field, chirped_oracle(Bessel(0), 0.5, 5.0, grid).field)
    assert err <= 1e-5


def test_bessel_ordering(grid):
    errs = [rel_l2_error(bessel_psi0(0, a, 5.0, grid).field, bessel_exact(0, a, 5.0, grid).field)
            for a in (10.0, 5.0, 0.5)]
    assert errs[0] < errs[1] < errs[2]


def test_no_closed_form_for_chirped_airy(grid):
    assert exact_evolution(Airy(1.0), 1.0, 1.0, grid) is None
    assert exact_evolution(AiryGauss(1.0, 0.01), 0.5, 1.0, grid) is None
    assert exact_evolution(Airy(1.0), 0.0, 1.0, grid) is not None


def test_gaussian_exact_norm(grid):
    f = gaussian_exact(0.8, 1.5, 2.0, grid)
    assert l2_norm(f) == pytest.approx(l2_norm(sample(Gaussian(0.8), grid)), rel=1e-12)
