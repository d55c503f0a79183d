"""Numpy implementations of the hot kernels.

The compiled extension in ``_fast.pyx`` provides the same three functions;
``cliffroot._kernels`` picks one backend at import time.  Both operate on the
dense 2^n coefficient representation, where the product of basis blades i and
j lands on blade ``i ^ j`` with a precomputed sign.
"""

from __future__ import annotations

import numpy as np


def make_product_table(signs: np.ndarray):
    """Preprocess a (dim, dim) sign matrix for `geometric_product`.

    Returns (sw, ij) with ij[m, i] = m ^ i and sw[m, i] = signs[i, m ^ i],
    so that out[m] = sum_i sw[m, i] * a[i] * b[ij[m, i]].
    """
    signs = np.asarray(signs, dtype=np.float64)
    dim = signs.shape[0]
    idx = np.arange(dim)
    ij = idx[:, None] ^ idx[None, :]
    sw = signs[idx[None, :], ij]
    sw.flags.writeable = False
    ij.flags.writeable = False
    return sw, ij


def geometric_product(table, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    sw, ij = table
    return (sw * b[ij]) @ a


def quad_values_and_jacobian(forms: np.ndarray, a: np.ndarray):
    """Evaluate all quadratic forms and their gradients at once.

    forms is (dim, dim, dim) with each forms[m] symmetric.  Returns
    (values, jac) with values[m] = a . forms[m] . a and jac[m] = 2 forms[m] a.
    """
    jac = 2.0 * np.tensordot(forms, a, axes=([2], [0]))
    return 0.5 * (jac @ a), jac


def quad_values(forms: np.ndarray, a: np.ndarray) -> np.ndarray:
    return np.tensordot(forms, a, axes=([2], [0])) @ a
