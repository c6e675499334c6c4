"""Kernel backend selection.

The hot path of the whole package is evaluating term-list polynomials (value,
gradient bank, Hessian bank) at one or many points.  A compiled Cython module
is used when present; otherwise the numpy implementation is selected.  Set
``ISOLAB_PURE_PYTHON=1`` to force the fallback regardless.
"""

import os

import numpy as np

from . import _kernels_py

_impl = _kernels_py
_name = "python"

if os.environ.get("ISOLAB_PURE_PYTHON", "").lower() not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled

        _impl = _compiled
        _name = "compiled"
    except ImportError:
        pass


def backend_name():
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return _name


def eval_terms(coeffs, exps, points):
    points = np.ascontiguousarray(points, dtype=np.float64)
    single = points.ndim == 1
    if single:
        points = points[None, :]
    out = np.asarray(_impl.eval_terms(coeffs, exps, points))
    return float(out[0]) if single else out


def eval_bank(coeffs, exps, offsets, points):
    points = np.ascontiguousarray(points, dtype=np.float64)
    single = points.ndim == 1
    if single:
        points = points[None, :]
    out = np.asarray(_impl.eval_bank(coeffs, exps, offsets, points))
    return out[0] if single else out
