import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chirpwave.factorization import (
    apply_chirp,
    f4_asymptotics,
    f4_sweep,
    factor_coeffs,
    squeeze_scale_analytic,
    squeeze_scale_sampled,
    write_f4_sweep_csv,
)
from chirpwave.gridfield import Grid, WaveField, density, l2_norm, rel_l2_error, sample
from chirpwave.states import Bessel, Gaussian, Sinc


def test_coeffs_at_t0():
    c = factor_coeffs(2.7, 0.0)
    assert (c.f1, c.f2, c.f3, c.f4, c.s) == (2.7, 0.0, 0.0, 0.0, 1.0)


def test_coeffs_without_chirp():
    c = factor_coeffs(0.0, 3.0)
    assert (c.f1, c.f2, c.f3, c.s) == (0.0, 0.0, 0.0, 1.0)
    assert c.f4 == -1.5


def test_coeffs_reference_point():
    c = factor_coeffs(0.5, 1.0)
    assert c.s == 2.0
    assert c.f1 == pytest.approx(0.25, abs=1e-15)
    assert c.f2 == pytest.approx(-math.log(2) / 2, abs=1e-15)
    assert c.f3 == pytest.approx(0.25, abs=1e-15)
    assert c.f4 == pytest.approx(-0.25, abs=1e-15)


def test_coeffs_reject_nonpositive_s():
    with pytest.raises(ValueError):
        factor_coeffs(-1.0, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 50.0), st.floats(0.0, 50.0))
def test_coeff_identities(alpha, t):
    c = factor_coeffs(alpha, t)
    assert c.f4 == pytest.approx(c.f3 - t / 2, abs=1e-12 * max(1.0, t))
    assert c.f4 == pytest.approx(-t / (2 * c.s), rel=1e-12, abs=1e-300)
    assert math.exp(-2 * c.f2) == pytest.approx(c.s, rel=1e-13)


def test_f4_small_alpha_series():
    small, large = f4_asymptotics(0.0, 2.0)
    assert small == factor_coeffs(0.0, 2.0).f4 == -1.0
    assert math.isnan(large)
    a, t = 0.01, 1.0
    assert abs(factor_coeffs(a, t).f4 - f4_asymptotics(a, t)[0]) <= 8 * t**4 * a**3


def test_f4_large_alpha_series():
    a, t = 10.0, 5.0
    err = abs(factor_coeffs(a, t).f4 - f4_asymptotics(a, t)[1])
    assert err <= 1.0 / (16 * a**3 * t**2)
    assert factor_coeffs(a, t).f4 == pytest.approx(-1 / (4 * a), rel=0.1)


def test_f4_sweep_table(tmp_path):
    times = np.linspace(0.0, 5.0, 500)
    rows = f4_sweep(5.0, times)
    assert rows.shape == (500, 4)
    assert rows[0, 1] == 0.0 and rows[0, 2] == 0.0 and math.isnan(rows[0, 3])
    assert np.all(np.diff(rows[:, 1]) < 0)
    path = write_f4_sweep_csv(rows, tmp_path / "f4.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "t,f4_exact,f4_small_alpha,f4_large_alpha"
    assert len(lines) == 501


def test_chirp_properties():
    g = Grid(256, -8.0, 8.0)
    f = sample(Gaussian(1.0), g) * (1 + 0.2j)
    assert np.array_equal(apply_chirp(f, 0.0).values, f.values)
    assert np.allclose(density(apply_chirp(f, 3.3)), density(f), rtol=1e-14, atol=0)
    two = apply_chirp(apply_chirp(f, 0.4), 1.1)
    assert rel_l2_error(two, apply_chirp(f, 1.5)) < 1e-13


def test_squeeze_analytic():
    g = Grid(1024, -40.0, 40.0)
    assert np.array_equal(squeeze_scale_analytic(Sinc(1.0), 1.0, g).values, sample(Sinc(1.0), g).values)
    sq = squeeze_scale_analytic(Sinc(1.0), 2.0, g)
    assert sq.values[g.n // 2] == pytest.approx(2 / math.sqrt(2), rel=1e-15)


def test_squeeze_analytic_norm_converges():
    ratios = []
    for n in (64, 256, 1024):
        g = Grid(n, -20.0, 20.0)
        ratios.append(l2_norm(squeeze_scale_analytic(Gaussian(0.5), 1.7, g)) / l2_norm(sample(Gaussian(0.5), g)))
    assert abs(ratios[-1] - 1.0) < 1e-12


def test_squeeze_sampled_identity_and_constant():
    g = Grid(128, -4.0, 4.0)
    f = sample(Gaussian(1.0), g)
    assert np.array_equal(squeeze_scale_sampled(f, 1.0).values, f.values)
    const = squeeze_scale_sampled(WaveField(g, np.full(128, 3.0 + 0j)), 2.0)
    assert const.coverage == 1.0
    assert np.allclose(const.values, 3.0 / math.sqrt(2.0), rtol=1e-13)


def test_squeeze_sampled_partial_coverage():
    g = Grid(128, -4.0, 4.0)
    out = squeeze_scale_sampled(sample(Gaussian(1.0), g), 0.5)
    assert 0.4 < out.coverage < 0.6
    assert out.values[0] == 0.0


def test_squeeze_sampled_against_analytic(grid):
    f = sample(Bessel(0), grid)
    err = rel_l2_error(squeeze_scale_sampled(f, 2.0), squeeze_scale_analytic(Bessel(0), 2.0, grid))
    assert err <= 1e-6
