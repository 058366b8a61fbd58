"""Acceptance criteria, one test each, at their stated tolerances and time limits.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""
import filecmp
import math
import sys
import tempfile
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path

import pytest

from chirpwave import checks
from chirpwave.cli import main
from chirpwave.experiments import FIGURE_IDS


def _line(r: checks.CheckResult) -> str:
    status = "PASS" if r.ok else "FAIL"
    limit = "" if math.isinf(r.max_seconds) else f", limit {r.max_seconds:g} s"
    label = f"criterion {r.key}" if r.key.isdigit() else f"invariant {r.key}"
    return (f"{status} {label}: {r.name}: {r.value:.3e} vs tol {r.tolerance:.1e}"
            f" ({r.seconds:.2f} s{limit}); {r.detail}")


@pytest.mark.parametrize("key", [c[0] for c in checks.CHECKS])
def test_criterion(key, acceptance_log):
    r = checks.run_check(key)
    acceptance_log(_line(r))
    assert r.passed, r.detail
    assert r.seconds <= r.max_seconds, f"took {r.seconds:.1f} s"


def _run_all(root: Path):
    outputs = {}
    for argv in [["selftest"]] + [["figure", "--id", fid] for fid in FIGURE_IDS]:
        buf = StringIO()
        with redirect_stdout(buf):
            code = main(argv + ["--out", str(root)])
        outputs[" ".join(argv)] = (code, buf.getvalue().replace(str(root), "<out>"))
    return outputs


def _tree(root: Path):
    return sorted(p.relative_to(root) for p in root.rglob("*") if p.is_file())


def determinism():
    with tempfile.TemporaryDirectory() as one, tempfile.TemporaryDirectory() as two:
        a, b = Path(one), Path(two)
        out_a, out_b = _run_all(a), _run_all(b)
        files = _tree(a)
        same_tree = files == _tree(b)
        differing = [str(f) for f in files if not filecmp.cmp(a / f, b / f, shallow=False)]
        stdout_same = out_a == out_b
        codes = all(code == 0 for code, _ in out_a.values())
    ok = same_tree and not differing and stdout_same and codes
    detail = f"{len(files)} files compared; differing: {differing or 'none'}; stdout identical: {stdout_same}"
    return ok, detail


def test_criterion_9_determinism(acceptance_log):
    ok, detail = determinism()
    acceptance_log(f"{'PASS' if ok else 'FAIL'} criterion 9: selftest and figure jobs byte-identical across runs; {detail}")
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for r in checks.run_checks():
        print(_line(r))
        failures += not r.ok
    ok, detail = determinism()
    print(f"{'PASS' if ok else 'FAIL'} criterion 9: selftest and figure jobs byte-identical across runs; {detail}")
    sys.exit(1 if failures or not ok else 0)
