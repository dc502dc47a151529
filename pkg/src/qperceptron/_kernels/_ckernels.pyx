# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Semantics must match qperceptron._kernels.pure exactly; see that module's
docstrings for the contracts.  The expectation sum runs row-major with a
plain accumulator, which can differ from numpy's vectorized reduction by a
few ulp -- callers treat kernel outputs as accurate to ~1e-13 relative.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "c"


def expectation(const cnp.complex128_t[:, :] op, const cnp.complex128_t[:] state):
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex acc = 0
    cdef double complex row
    for i in range(n):
        row = 0
        for j in range(n):
            row = row + op[i, j] * state[j]
        acc = acc + state[i].conjugate() * row
    return complex(acc)


def accumulate_outer(cnp.complex128_t[:, :] acc, const cnp.complex128_t[:] state,
                     double weight):
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t i, j
    cdef double complex w_si
    for i in range(n):
        w_si = weight * state[i]
        for j in range(n):
            acc[i, j] = acc[i, j] + w_si * state[j].conjugate()


def draw_outcomes(const double[:] cumprobs, const double[:] uniforms):
    cdef Py_ssize_t k = cumprobs.shape[0]
    cdef Py_ssize_t n = uniforms.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t i, j
    cdef double u
    for i in range(n):
        u = uniforms[i]
        j = 0
        while j < k - 1 and u >= cumprobs[j]:
            j += 1
        out[i] = j
    return out
