"""Figure-data jobs, alpha sweeps and invariance audits.

Every job writes CSV files plus a ``report.json`` under
``<output_dir>/<experiment-id>/``.  Data files never contain timings, so
re-running a job reproduces them byte for byte.
"""
from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .factorization import factor_coeffs, f4_sweep, write_f4_sweep_csv
from .gridfield import Grid, WaveField, default_grid, density, rel_l2_error, write_field_csv
from .propagators import (
    EvolvedField,
    airy_gauss_exact,
    chirped_oracle,
    exact_evolution,
    factorized_propagation,
    psi0,
    psi0_at,
    psi1,
)
from .specfun import DEFAULT_QUADRATURE, QuadratureSpec
from .states import AiryGauss, Bessel, InitialState, Sinc

__all__ = [
    "EXPERIMENT_IDS",
    "ExperimentError",
    "ExperimentSpec",
    "ComparisonReport",
    "compare_cell",
    "alpha_error_curve",
    "run_experiment",
    "figure_spec",
    "INVARIANCE_PROBES",
    "FIGURE_IDS",
    "PROPAGATION_METHODS",
    "propagate",
    "default_jobs",
]

EXPERIMENT_IDS = ("fig1", "fig2", "fig3", "fig4", "sweep", "invariance")
FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4")
INVARIANCE_PROBES = np.linspace(-9.5, 9.5, 20)


class ExperimentError(RuntimeError):
    """A cell of an experiment failed; the message names the (alpha, t) cell."""


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    state: Optional[InitialState]
    alphas: tuple
    times: tuple
    grid: Grid = field(default_factory=default_grid)
    output_dir: Path = Path("out")
    quad: QuadratureSpec = DEFAULT_QUADRATURE
    jobs: int = 1

    def __post_init__(self):
        if self.id not in EXPERIMENT_IDS:
            raise ValueError(f"unknown experiment id {self.id!r}; expected one of {EXPERIMENT_IDS}")
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if not self.alphas or not self.times:
            raise ValueError("alphas and times must be non-empty")
        if any(a < 0 for a in self.alphas) or any(t < 0 for t in self.times):
            raise ValueError("experiments support alpha >= 0 and t >= 0 only")
        if self.state is None and self.id != "fig2":
            raise ValueError(f"{self.id} needs an initial state")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.id == "fig1" and not isinstance(self.state, AiryGauss):
            raise ValueError("fig1 needs an Airy-Gauss state")
        if self.id == "fig1" and any(a != 0 for a in self.alphas):
            raise ValueError("fig1 is unchirped (alpha = 0)")
        if self.id == "fig3" and not isinstance(self.state, Sinc):
            raise ValueError("fig3 needs a Sinc state")
        if self.id == "fig4" and not isinstance(self.state, Bessel):
            raise ValueError("fig4 needs a Bessel state")

    @property
    def directory(self) -> Path:
        return self.output_dir / self.id


@dataclass
class ComparisonReport:
    experiment: str
    grid: Grid
    cells: list
    files: list = field(default_factory=list)
    wall_time: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "grid": self.grid.to_dict(),
            "cells": self.cells,
            "files": self.files,
        }

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(_clean(self.to_json()), indent=2) + "\n")
        return path


def _clean(obj):
    """Make a report JSON-safe: numpy scalars to float, NaN/Inf to None."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _write_columns(path: Path, columns: dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    data = [np.asarray(columns[n], dtype=float) for n in names]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*data):
            w.writerow([repr(float(v)) for v in row])
    return path


# ---------------------------------------------------------------------------
# comparison cells
# ---------------------------------------------------------------------------

@dataclass
class CellFields:
    reference: EvolvedField
    psi0: EvolvedField
    psi1: EvolvedField
    oracle: Optional[EvolvedField]


def compare_cell(state: InitialState, alpha: float, t: float, grid: Grid,
                 quad: QuadratureSpec = DEFAULT_QUADRATURE, with_oracle: bool = True):
    """Errors of psi0 / psi1 against the exact field for one (alpha, t).

    Falls back to the chirped oracle as the reference when no closed form
    exists.  Returns ``(errors, CellFields)``.
    """
    exact = exact_evolution(state, alpha, t, grid, quad)
    oracle = chirped_oracle(state, alpha, t, grid) if (with_oracle or exact is None) else None
    ref = exact if exact is not None else oracle
    p0 = psi0(state, alpha, t, grid)
    p1 = psi1(state, alpha, t, grid, quad)
    rho = density(ref.field)
    errors = {
        "psi0_vs_exact": rel_l2_error(p0.field, ref.field),
        "psi1_vs_exact": rel_l2_error(p1.field, ref.field),
        "exact_vs_oracle": (
            rel_l2_error(exact.field, oracle.field) if exact is not None and oracle is not None else None
        ),
        "density_sup_psi0": float(np.max(np.abs(density(p0.field) - rho))),
        "density_sup_psi1": float(np.max(np.abs(density(p1.field) - rho))),
        "reference": ref.method,
    }
    return errors, CellFields(ref, p0, p1, oracle)


def alpha_error_curve(state: InitialState, alphas: Sequence[float], t: float, grid: Grid,
                      quad: QuadratureSpec = DEFAULT_QUADRATURE) -> list:
    """Rows ``(alpha, err_psi0, err_psi1, f4)`` sorted by alpha."""
    rows = []
    for a in sorted(float(a) for a in alphas):
        try:
            errors, _ = compare_cell(state, a, t, grid, quad, with_oracle=False)
        except Exception as exc:
            raise ExperimentError(f"alpha={a:g}, t={t:g}: {exc}") from exc
        rows.append((a, errors["psi0_vs_exact"], errors["psi1_vs_exact"], factor_coeffs(a, t).f4))
    return rows


def _run_cells(spec: ExperimentSpec, cells, func):
    """Evaluate ``func(alpha, t)`` for every cell, in order, possibly in threads."""
    def wrapped(cell):
        a, t = cell
        start = time.perf_counter()
        try:
            result = func(a, t)
        except Exception as exc:
            raise ExperimentError(f"{spec.id}: cell alpha={a:g}, t={t:g} failed: {exc}") from exc
        return result, time.perf_counter() - start

    if spec.jobs == 1 or len(cells) == 1:
        return [wrapped(c) for c in cells]
    with ThreadPoolExecutor(max_workers=spec.jobs) as pool:
        return list(pool.map(wrapped, cells))


def _tag(value: float) -> str:
    return f"{value:g}"


# ---------------------------------------------------------------------------
# jobs
# ---------------------------------------------------------------------------

def _fig1(spec: ExperimentSpec) -> ComparisonReport:
    st = spec.state
    grid = spec.grid
    cells = [(0.0, t) for t in spec.times]

    def job(_, t):
        exact = airy_gauss_exact(st.eps, st.beta, t, grid)
        oracle = chirped_oracle(st, 0.0, t, grid).field
        # rigid translate of the t = 0 profile by the Airy acceleration
        shift = st.eps**3 * t * t / 4.0
        rigid = airy_gauss_exact(st.eps, st.beta, 0.0, Grid(grid.n, grid.x_min - shift, grid.x_max - shift))
        rho, rho_rigid = density(exact), density(rigid)
        return exact, {
            "exact_vs_oracle": rel_l2_error(exact, oracle),
            "deformation_vs_rigid": float(np.max(np.abs(rho - rho_rigid)) / np.max(rho_rigid)),
            "peak_density": float(np.max(rho)),
            "peak_x": float(grid.x[int(np.argmax(rho))]),
        }

    results = _run_cells(spec, cells, job)
    report = ComparisonReport(spec.id, grid, [])
    for panel, ((a, t), ((exact, errors), wall)) in zip("abcdefgh", zip(cells, results)):
        path = write_field_csv(exact, spec.directory / f"{panel}.csv")
        report.files.append(path.name)
        report.cells.append({"panel": panel, "state": st.describe(), "alpha": a, "t": t,
                             "method": "exact_closed_form", "errors": errors})
        report.wall_time[(a, t)] = wall
    return report


def _fig2(spec: ExperimentSpec) -> ComparisonReport:
    report = ComparisonReport(spec.id, spec.grid, [])
    times = np.asarray(spec.times)
    for a in spec.alphas:
        rows = f4_sweep(a, times)
        path = write_f4_sweep_csv(rows, spec.directory / f"f4_alpha_{_tag(a)}.csv")
        report.files.append(path.name)
        report.cells.append({
            "alpha": a,
            "t": float(times[-1]),
            "method": "f4",
            "errors": {},
            "max_abs_f4": float(np.max(np.abs(rows[:, 1]))),
            "f4_at_t_max": float(rows[-1, 1]),
        })
    return report


def _comparison_job(spec: ExperimentSpec):
    def job(a, t):
        return compare_cell(spec.state, a, t, spec.grid, spec.quad)
    return job


def _cell_entry(errors, fields: CellFields, panel=None):
    entry = fields.reference.to_report(errors)
    entry["method"] = "psi0,psi1 vs " + fields.reference.method
    if panel is not None:
        entry = {"panel": panel, **entry}
    return entry


def _fig3(spec: ExperimentSpec) -> ComparisonReport:
    cells = [(a, t) for a in spec.alphas for t in spec.times]
    results = _run_cells(spec, cells, _comparison_job(spec))
    report = ComparisonReport(spec.id, spec.grid, [])
    panels = iter("abcdefghijklmnop")
    x = spec.grid.x
    for (a, t), ((errors, fields), wall) in zip(cells, results):
        pa, pb = next(panels), next(panels)
        rho0 = density(fields.psi0.field)
        diff = density(fields.psi1.field - fields.psi0.field)
        p = _write_columns(spec.directory / f"{pa}.csv",
                           {"x": x, "density_exact": density(fields.reference.field), "density_psi0": rho0})
        q = _write_columns(spec.directory / f"{pb}.csv",
                           {"x": x, "density_psi0": rho0, "density_psi1_minus_psi0": diff})
        report.files += [p.name, q.name]
        report.cells.append(_cell_entry(errors, fields, panel=f"{pa},{pb}"))
        report.wall_time[(a, t)] = wall
    return report


def _fig4_like(spec: ExperimentSpec, naming) -> ComparisonReport:
    cells = [(a, t) for a in spec.alphas for t in spec.times]
    results = _run_cells(spec, cells, _comparison_job(spec))
    report = ComparisonReport(spec.id, spec.grid, [])
    x = spec.grid.x
    for i, ((a, t), ((errors, fields), wall)) in enumerate(zip(cells, results)):
        name = naming(i, a, t)
        path = _write_columns(spec.directory / f"{name}.csv", {
            "x": x,
            "density_exact": density(fields.reference.field),
            "density_psi0": density(fields.psi0.field),
            "density_psi1": density(fields.psi1.field),
        })
        report.files.append(path.name)
        report.cells.append(_cell_entry(errors, fields, panel=name))
        report.wall_time[(a, t)] = wall
    return report


def _sweep(spec: ExperimentSpec) -> ComparisonReport:
    report = _fig4_like(spec, lambda i, a, t: f"alpha_{_tag(a)}_t_{_tag(t)}")
    table = {
        "alpha": [c["alpha"] for c in report.cells],
        "t": [c["t"] for c in report.cells],
        "err_psi0": [c["errors"]["psi0_vs_exact"] for c in report.cells],
        "err_psi1": [c["errors"]["psi1_vs_exact"] for c in report.cells],
        "err_exact_vs_oracle": [
            np.nan if c["errors"]["exact_vs_oracle"] is None else c["errors"]["exact_vs_oracle"]
            for c in report.cells
        ],
        "f4": [c["f4"] for c in report.cells],
    }
    report.files.append(_write_columns(spec.directory / "errors.csv", table).name)
    return report


def _invariance(spec: ExperimentSpec) -> ComparisonReport:
    """``s * |psi0(s x0, t)|^2`` at fixed profile coordinates x0 for each t."""
    alpha = spec.alphas[0]
    x0 = INVARIANCE_PROBES
    base = np.abs(np.asarray(spec.state(x0))) ** 2
    columns = {"x0": x0, "density_phi": base}
    report = ComparisonReport(spec.id, spec.grid, [])
    for t in spec.times:
        c = factor_coeffs(alpha, t)
        scaled = c.s * np.abs(psi0_at(spec.state, alpha, t, c.s * x0)) ** 2
        columns[f"t_{_tag(t)}"] = scaled
        report.cells.append({
            "alpha": alpha, "t": t, "method": "psi0", "s": c.s,
            "errors": {"max_abs_deviation": float(np.max(np.abs(scaled - base)))},
        })
    report.files.append(_write_columns(spec.directory / "invariance.csv", columns).name)
    return report


_JOBS = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": lambda spec: _fig4_like(spec, lambda i, a, t: "abcdefghijklmnop"[i]),
    "sweep": _sweep,
    "invariance": _invariance,
}


def run_experiment(spec: ExperimentSpec) -> ComparisonReport:
    """Run a job, write its CSV files and ``report.json``, return the report."""
    start = time.perf_counter()
    report = _JOBS[spec.id](spec)
    report.write(spec.directory / "report.json")
    report.wall_time["total"] = time.perf_counter() - start
    return report


def figure_spec(fig_id: str, output_dir="out", grid: Optional[Grid] = None,
                quad: QuadratureSpec = DEFAULT_QUADRATURE, jobs: int = 1) -> ExperimentSpec:
    """Parameters of the four reproduced figures."""
    grid = grid or default_grid()
    common = dict(grid=grid, output_dir=Path(output_dir), quad=quad, jobs=jobs)
    if fig_id == "fig1":
        return ExperimentSpec("fig1", AiryGauss(1.0, 0.01), (0.0,), (0.0, 1.0, 2.0), **common)
    if fig_id == "fig2":
        return ExperimentSpec("fig2", None, (10.0, 5.0, 0.5), tuple(np.linspace(0.0, 5.0, 500)), **common)
    if fig_id == "fig3":
        return ExperimentSpec("fig3", Sinc(1.0), (0.3, 3.0), (5.0,), **common)
    if fig_id == "fig4":
        return ExperimentSpec("fig4", Bessel(0, quad), (10.0, 5.0, 0.5), (5.0,), **common)
    raise ValueError(f"unknown figure id {fig_id!r}; expected one of {FIGURE_IDS}")


def default_jobs() -> int:
    return os.cpu_count() or 1


PROPAGATION_METHODS = ("oracle", "exact", "psi0", "psi1", "factorized")


def propagate(state: InitialState, alpha: float, t: float, method: str, grid: Grid,
              output_dir, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> dict:
    """Evolve one state with one method; write ``propagate/<method>.csv`` and
    ``propagate/report.json``.  Errors against the oracle and the closed form
    are included when those exist."""
    makers = {
        "oracle": lambda: chirped_oracle(state, alpha, t, grid),
        "exact": lambda: exact_evolution(state, alpha, t, grid, quad),
        "psi0": lambda: psi0(state, alpha, t, grid),
        "psi1": lambda: psi1(state, alpha, t, grid, quad),
        "factorized": lambda: factorized_propagation(state, alpha, t, grid),
    }
    if method not in makers:
        raise ValueError(f"unknown method {method!r}; expected one of {PROPAGATION_METHODS}")
    try:
        evolved = makers[method]()
        if evolved is None:
            raise ValueError(f"no closed form for {state.describe()} at alpha={alpha:g}")
        oracle = evolved if method == "oracle" else chirped_oracle(state, alpha, t, grid)
        exact = evolved if method == "exact" else exact_evolution(state, alpha, t, grid, quad)
    except (ValueError, TypeError):
        raise
    except Exception as exc:
        raise ExperimentError(f"propagate: cell alpha={alpha:g}, t={t:g} failed: {exc}") from exc
    errors = {
        "vs_oracle": rel_l2_error(evolved.field, oracle.field),
        "vs_exact": None if exact is None else rel_l2_error(evolved.field, exact.field),
    }
    directory = Path(output_dir) / "propagate"
    write_field_csv(evolved.field, directory / f"{method}.csv")
    entry = evolved.to_report(errors)
    entry["grid"] = grid.to_dict()
    (directory / "report.json").write_text(json.dumps(_clean(entry), indent=2) + "\n")
    return _clean(entry)
