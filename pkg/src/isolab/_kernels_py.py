"""Pure-numpy kernels for term-list polynomial evaluation.

This is the fallback backend; `isolab._kernels` (Cython) implements the same
two functions.  Both operate on the packed representation used by
:mod:`isolab.polynomial`: coefficients ``(T,)`` float64, exponents ``(T, D)``
int64, points ``(N, D)`` float64.
"""

import numpy as np


def _monomials(exps, points):
    # (N, T) matrix of monomial values; per-dimension power tables keep the
    # exponentiation integer and cheap.
    n = points.shape[0]
    t, d = exps.shape
    acc = np.ones((n, t))
    for j in range(d):
        e = exps[:, j]
        top = int(e.max()) if t else 0
        if top == 0:
            continue
        table = points[:, j, None] ** np.arange(top + 1)
        acc *= table[:, e]
    return acc


def eval_terms(coeffs, exps, points):
    """Evaluate one term-list polynomial at each row of `points`."""
    return _monomials(exps, points) @ coeffs


def eval_bank(coeffs, exps, offsets, points):
    """Evaluate a bank of polynomials packed end to end.

    `offsets` has length P+1; polynomial p owns terms
    ``offsets[p]:offsets[p+1]``.  Segments must be non-empty (the packer
    inserts an explicit zero term for vanishing derivatives).  Returns
    ``(N, P)``.
    """
    weighted = _monomials(exps, points) * coeffs
    return np.add.reduceat(weighted, offsets[:-1], axis=1)
