# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Lindblad superoperator assembly.

Column-stacking vectorization: vec(A rho B) = (B^T kron A) vec(rho), so the
composite index of rho[a, b] is a + d * b.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def assemble(double complex[:, ::1] heff,
             double[::1] rates,
             double complex[:, :, ::1] jumps):
    """L = -i (I kron Heff) + i (conj(Heff) kron I) + sum_k r_k conj(c_k) kron c_k."""
    cdef Py_ssize_t d = heff.shape[0]
    cdef Py_ssize_t m = jumps.shape[0]
    cdef Py_ssize_t D = d * d
    cdef Py_ssize_t a, b, c, e, k, p, q, nnz
    cdef double complex h, v1, v2
    cdef double r

    out = np.zeros((D, D), dtype=np.complex128)
    cdef double complex[:, ::1] L = out

    # sparse listing of each collapse operator
    rows_arr = np.empty(d * d, dtype=np.intp)
    cols_arr = np.empty(d * d, dtype=np.intp)
    vals_arr = np.empty(d * d, dtype=np.complex128)
    cdef Py_ssize_t[::1] rows = rows_arr
    cdef Py_ssize_t[::1] cols = cols_arr
    cdef double complex[::1] vals = vals_arr

    with nogil:
        for b in range(d):
            for a in range(d):
                for c in range(d):
                    h = heff[a, c]
                    if h != 0:
                        L[a + d * b, c + d * b] += -1j * h
        for b in range(d):
            for e in range(d):
                h = heff[b, e]
                if h != 0:
                    h = h.conjugate()
                    for a in range(d):
                        L[a + d * b, a + d * e] += 1j * h

        for k in range(m):
            r = rates[k]
            if r == 0:
                continue
            nnz = 0
            for a in range(d):
                for c in range(d):
                    if jumps[k, a, c] != 0:
                        rows[nnz] = a
                        cols[nnz] = c
                        vals[nnz] = jumps[k, a, c]
                        nnz = nnz + 1
            # (conj(c) kron c)[a + d b, c' + d e] = conj(c[b, e]) c[a, c']
            for p in range(nnz):
                v1 = r * vals[p].conjugate()
                b = rows[p]
                e = cols[p]
                for q in range(nnz):
                    v2 = vals[q]
                    L[rows[q] + d * b, cols[q] + d * e] += v1 * v2
    return out
