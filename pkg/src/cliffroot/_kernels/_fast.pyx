# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled versions of the hot kernels (see `pure.py` for the reference)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def make_product_table(signs):
    """The compiled product walks the raw sign matrix directly."""
    table = np.ascontiguousarray(signs, dtype=np.float64)
    table.flags.writeable = False
    return table


def geometric_product(table, a, b):
    cdef const double[:, :] signs = table
    cdef const double[:] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef int dim = signs.shape[0]
    out = np.zeros(dim, dtype=np.float64)
    cdef double[:] ov = out
    cdef int i, j
    cdef double ai
    for i in range(dim):
        ai = av[i]
        if ai != 0.0:
            for j in range(dim):
                ov[i ^ j] += signs[i, j] * ai * bv[j]
    return out


def quad_values_and_jacobian(forms, a):
    cdef const double[:, :, :] q = forms
    cdef const double[:] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef int dim = q.shape[0]
    values = np.empty(dim, dtype=np.float64)
    jac = np.empty((dim, dim), dtype=np.float64)
    cdef double[:] vv = values
    cdef double[:, :] jv = jac
    cdef int m, i, j
    cdef double row, total
    for m in range(dim):
        total = 0.0
        for i in range(dim):
            row = 0.0
            for j in range(dim):
                row += q[m, i, j] * av[j]
            jv[m, i] = 2.0 * row
            total += av[i] * row
        vv[m] = total
    return values, jac


def quad_values(forms, a):
    cdef const double[:, :, :] q = forms
    cdef const double[:] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef int dim = q.shape[0]
    values = np.empty(dim, dtype=np.float64)
    cdef double[:] vv = values
    cdef int m, i, j
    cdef double row, total, ai
    for m in range(dim):
        total = 0.0
        for i in range(dim):
            ai = av[i]
            if ai != 0.0:
                row = 0.0
                for j in range(dim):
                    row += q[m, i, j] * av[j]
                total += ai * row
        vv[m] = total
    return values
