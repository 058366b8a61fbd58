"""Self-test suite: the acceptance criteria plus cheap invariants.

Each check returns a :class:`CheckResult`; ``run_checks`` collects them in a
fixed order.  Results carry no timings in their printable form so that the
self-test output is reproducible byte for byte.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .factorization import apply_chirp, factor_coeffs, f4_asymptotics
from .gridfield import Grid, default_grid, density, l2_norm, rel_l2_error, sample
from .propagators import (
    airy_exact,
    airy_gauss_exact,
    bessel_exact,
    bessel_first_order_expansion,
    bessel_psi0,
    bessel_psi1,
    bessel_psi1_printed,
    chirped_oracle,
    factorized_propagation,
    psi0_at,
    psi1_generic,
    sinc_exact,
    sinc_psi0,
    sinc_psi1,
    spectral_free_step,
)
from .specfun import bessel_jn, generalized_bessel
from .states import AiryGauss, Bessel, Gaussian, Sinc

__all__ = ["CheckResult", "CHECKS", "run_checks", "format_result"]


@dataclass(frozen=True)
class CheckResult:
    key: str
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    max_seconds: float = float("inf")

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds <= self.max_seconds

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }


def format_result(r: CheckResult) -> str:
    status = "PASS" if r.passed else "FAIL"
    line = f"{status} [{r.key}] {r.name}: {r.value:.3e} (tol {r.tolerance:.1e})"
    return line + (f"; {r.detail}" if r.detail else "")


# ---------------------------------------------------------------------------

def airy_gauss_oracle_gate(grid: Grid = None):
    grid = grid or default_grid()
    st = AiryGauss(1.0, 0.01)
    start = sample(st, grid)
    errs = [rel_l2_error(airy_gauss_exact(1.0, 0.01, t, grid), spectral_free_step(start, t))
            for t in (0.5, 1.0, 2.0)]
    return max(errs), 1e-6, max(errs) <= 1e-6, "t=0.5,1,2: " + ", ".join(f"{e:.2e}" for e in errs)


def factorization_identity(grid: Grid = None):
    grid = grid or default_grid()
    worst, where = 0.0, ""
    for st in (Gaussian(1.0), Sinc(1.0), Bessel(0)):
        for a in (0.5, 3.0):
            for t in (1.0, 5.0):
                err = rel_l2_error(factorized_propagation(st, a, t, grid).field,
                                   chirped_oracle(st, a, t, grid).field)
                if err >= worst:
                    worst, where = err, f"worst at {st.describe()}, alpha={a:g}, t={t:g}"
    return worst, 1e-8, worst <= 1e-8, where


def density_invariance():
    x0 = np.linspace(-9.5, 9.5, 20)
    worst = 0.0
    for st in (Gaussian(1.0), Sinc(1.0), Bessel(0)):
        rows = []
        for t in (0.0, 1.0, 5.0):
            s = factor_coeffs(1.0, t).s
            rows.append(s * np.abs(psi0_at(st, 1.0, t, s * x0)) ** 2)
        rows = np.array(rows)
        worst = max(worst, float(np.max(np.ptp(rows, axis=0))))
    return worst, 1e-12, worst <= 1e-12, "alpha=1, t=0,1,5, 20 probes, 3 states"


def approximation_ordering(grid: Grid = None):
    grid = grid or default_grid()
    sinc_e0, sinc_e1 = [], []
    for a in (0.3, 1.0, 3.0, 10.0):
        ex = sinc_exact(1.0, a, 5.0, grid).field
        sinc_e0.append(rel_l2_error(sinc_psi0(1.0, a, 5.0, grid).field, ex))
        sinc_e1.append(rel_l2_error(sinc_psi1(1.0, a, 5.0, grid).field, ex))
    bes_e0, bes_e1 = [], []
    for a in (0.5, 5.0, 10.0):
        ex = bessel_exact(0, a, 5.0, grid).field
        bes_e0.append(rel_l2_error(bessel_psi0(0, a, 5.0, grid).field, ex))
        bes_e1.append(rel_l2_error(bessel_psi1(0, a, 5.0, grid).field, ex))
    ok = (
        all(np.diff(sinc_e0) < 0) and all(np.diff(bes_e0) < 0)
        and all(e1 <= e0 for e0, e1 in zip(sinc_e0, sinc_e1))
        and all(e1 <= e0 for e0, e1 in zip(bes_e0, bes_e1))
    )
    # value: largest ratio err_psi1 / err_psi0 (must stay <= 1)
    ratio = max(max(e1 / e0 for e0, e1 in zip(sinc_e0, sinc_e1)),
                max(e1 / e0 for e0, e1 in zip(bes_e0, bes_e1)))
    detail = ("sinc psi0 " + ", ".join(f"{e:.3e}" for e in sinc_e0)
              + "; bessel psi0 " + ", ".join(f"{e:.3e}" for e in bes_e0))
    return ratio, 1.0, ok, detail


def generalized_bessel_reductions():
    exact = all(
        generalized_bessel(n, x, 0.0).real == bessel_jn(n, x)
        for n in (0, 1, 2, 5) for x in (0.0, 0.7, 2.5, 13.0)
    )
    errs = [abs(generalized_bessel(0, 0.0, c) - np.exp(0.5j * c) * bessel_jn(0, c / 2.0))
            for c in (0.1, 1.0, 5.0)]
    worst = max(errs)
    return worst, 1e-9, exact and worst <= 1e-9, f"c=0 reduction bit-exact: {exact}"


def airy_rigidity(grid: Grid = None):
    grid = grid or default_grid()
    eps = 1.0
    peak0 = grid.x[int(np.argmax(density(airy_exact(eps, 0.0, grid))))]
    worst_shift, worst_sup = 0.0, 0.0
    for t in (0.0, 1.0, 2.0):
        shift = eps**3 * t * t / 4.0
        rho = density(airy_exact(eps, t, grid))
        moved = grid.x[int(np.argmax(rho))] - peak0
        worst_shift = max(worst_shift, abs(moved - shift))
        rigid = density(airy_exact(eps, 0.0, Grid(grid.n, grid.x_min - shift, grid.x_max - shift)))
        worst_sup = max(worst_sup, float(np.max(np.abs(rho - rigid))))
    ok = worst_shift <= grid.dx and worst_sup <= 1e-6
    return worst_sup, 1e-6, ok, f"argmax offset {worst_shift:.3e} (cell {grid.dx:.3e})"


def first_order_bessel(grid: Grid = None):
    grid = grid or default_grid()
    a, t = 10.0, 5.0
    spectral = psi1_generic(Bessel(0), a, t, grid).field
    closed = bessel_psi1(0, a, t, grid).field
    expansion = bessel_first_order_expansion(0, a, t, grid).field
    pairs = [rel_l2_error(spectral, closed), rel_l2_error(closed, expansion),
             rel_l2_error(spectral, expansion)]
    printed = rel_l2_error(bessel_psi1_printed(0, a, t, grid).field, expansion)
    worst = max(pairs)
    ok = worst <= 1e-6 and printed > 1e-4
    return worst, 1e-6, ok, f"real (1 + f4/2) coefficient misses by {printed:.3e}"


def f4_series_bounds():
    worst_ratio = 0.0
    for a in np.linspace(1e-4, 0.02, 40):
        for t in np.linspace(0.05, 2.0, 40):
            small, _ = f4_asymptotics(a, t)
            worst_ratio = max(worst_ratio, abs(factor_coeffs(a, t).f4 - small) / (8 * t**4 * a**3))
    for a in np.geomspace(5.0, 1e3, 40):
        for t in np.geomspace(1.0, 100.0, 40):
            _, large = f4_asymptotics(a, t)
            worst_ratio = max(worst_ratio, abs(factor_coeffs(a, t).f4 - large) / (2.0 / (8 * t * t * a**3)))
    return worst_ratio, 1.0, worst_ratio <= 1.0, "value = worst |error| / bound"


def parseval_and_chirp_norm(grid: Grid = None):
    grid = grid or default_grid()
    f = sample(AiryGauss(1.0, 0.01), grid)
    spec = np.fft.fft(f.values)
    parseval = abs(np.sqrt(np.sum(np.abs(spec) ** 2) / grid.n * grid.dx) / l2_norm(f) - 1.0)
    chirp = abs(l2_norm(apply_chirp(f, 0.7)) / l2_norm(f) - 1.0)
    step = abs(l2_norm(spectral_free_step(f, 1.3)) / l2_norm(f) - 1.0)
    worst = max(parseval, chirp, step)
    return worst, 1e-12, worst <= 1e-12, "Parseval, chirp and free-step norm drift"


def squeeze_coefficient_identity():
    worst = 0.0
    for a in (0.1, 0.5, 3.0, 10.0):
        for t in (0.0, 0.5, 1.0, 5.0):
            c = factor_coeffs(a, t)
            worst = max(worst, abs(np.exp(-2.0 * c.f2) / c.s - 1.0))
    return worst, 1e-14, worst <= 1e-14, "exp(-2 f2) == s"


CHECKS: list[tuple[str, str, Callable, float]] = [
    ("1", "Airy-Gauss closed form vs spectral propagator", airy_gauss_oracle_gate, 5.0),
    ("2", "factorization identity vs chirped oracle", factorization_identity, 10.0),
    ("3", "psi0 density invariance", density_invariance, float("inf")),
    ("4", "approximation ordering (psi1/psi0 error ratio)", approximation_ordering, 30.0),
    ("5", "generalized Bessel reductions", generalized_bessel_reductions, float("inf")),
    ("6", "Airy rigid translation", airy_rigidity, float("inf")),
    ("7", "first-order Bessel: spectral / closed form / expansion", first_order_bessel, float("inf")),
    ("8", "f4 small/large alpha series bounds", f4_series_bounds, float("inf")),
    ("inv-norm", "norm preservation", parseval_and_chirp_norm, float("inf")),
    ("inv-f2", "squeeze coefficient identity", squeeze_coefficient_identity, float("inf")),
]


def run_check(key: str) -> CheckResult:
    for k, name, func, max_seconds in CHECKS:
        if k == key:
            start = time.perf_counter()
            value, tol, passed, detail = func()
            return CheckResult(k, name, float(value), float(tol), bool(passed), detail,
                               time.perf_counter() - start, max_seconds)
    raise KeyError(key)


def run_checks() -> list[CheckResult]:
    return [run_check(k) for k, *_ in CHECKS]
