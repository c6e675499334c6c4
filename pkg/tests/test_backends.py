"""Kernel backends: the compiled module and the numpy fallback must agree."""

import pathlib
import subprocess
import sys

import numpy as np
import pytest

import isolab
from isolab import catalog
from isolab import _kernels_py

compiled = pytest.importorskip("isolab._kernels",
                               reason="compiled kernels not built")


def _bank_and_points(seed=0, n=500):
    fam = catalog("nomizu-quartic", n=2)
    poly = fam.polynomial
    rng = np.random.default_rng(seed)
    X = np.ascontiguousarray(rng.normal(size=(n, poly.ambient_dim)))
    return poly, X


def test_eval_terms_agreement():
    poly, X = _bank_and_points()
    a = np.asarray(compiled.eval_terms(poly.coeffs, poly.exps, X))
    b = _kernels_py.eval_terms(poly.coeffs, poly.exps, X)
    scale = max(1.0, np.abs(b).max())
    assert np.abs(a - b).max() / scale < 1e-12


def test_eval_bank_agreement():
    poly, X = _bank_and_points(1)
    for bank in (poly._gradient_bank(), poly._hessian_bank(),
                 poly._laplacian_bank()):
        c, e, o = bank
        a = np.asarray(compiled.eval_bank(c, e, o, X))
        b = _kernels_py.eval_bank(c, e, o, X)
        scale = max(1.0, np.abs(b).max())
        assert np.abs(a - b).max() / scale < 1e-12


def test_readonly_input_accepted():
    poly, X = _bank_and_points(2, n=4)
    X.flags.writeable = False
    out = np.asarray(compiled.eval_terms(poly.coeffs, poly.exps, X))
    assert out.shape == (4,)


def test_backend_env_override():
    code = ("import isolab; print(isolab.backend_name())")
    env_pure = {"ISOLAB_PURE_PYTHON": "1"}
    import os
    base = dict(os.environ)
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env={**base, **env_pure})
    assert out.stdout.strip() == "python"


def test_active_backend_reported():
    assert isolab.backend_name() in ("compiled", "python")


def test_benchmark_script_runs():
    script = pathlib.Path(__file__).resolve().parents[1] / "benchmarks" / \
        "bench_backends.py"
    proc = subprocess.run([sys.executable, str(script), "--quick"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "python" in proc.stdout
