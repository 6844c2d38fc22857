# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled simplex pivot loop.

Same tableau layout and pivot rules as _kernel_py; compiled with
-ffp-contract=off so the arithmetic matches the NumPy fallback exactly.
"""

from libc.stdint cimport int64_t

KERNEL_NAME = "cython"

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2


def run_pivots(double[:, ::1] tableau, int64_t[::1] basis, int ncols_enter,
               double tol, long max_iter):
    """Run Bland-rule pivots on a minimization tableau until optimal.

    See _kernel_py.run_pivots for the contract.
    """
    cdef Py_ssize_t m = tableau.shape[0] - 1
    cdef Py_ssize_t ncols = tableau.shape[1]
    cdef Py_ssize_t last = ncols - 1
    cdef Py_ssize_t i, j, k, col, row
    cdef long iters = 0
    cdef double piv, ratio, best, f

    while iters < max_iter:
        col = -1
        for j in range(ncols_enter):
            if tableau[m, j] < -tol:
                col = j  # Bland: smallest eligible index enters
                break
        if col < 0:
            return OPTIMAL, iters

        row = -1
        best = 0.0
        for i in range(m):
            if tableau[i, col] > tol:
                ratio = tableau[i, last] / tableau[i, col]
                if row < 0 or ratio < best or (ratio == best and basis[i] < basis[row]):
                    row = i  # Bland: smallest basic index breaks ties
                    best = ratio
        if row < 0:
            return UNBOUNDED, iters

        piv = tableau[row, col]
        for k in range(ncols):
            tableau[row, k] /= piv
        for i in range(m + 1):
            if i == row:
                continue
            f = tableau[i, col]
            if f == 0.0:
                continue
            for k in range(ncols):
                tableau[i, k] -= f * tableau[row, k]
        basis[row] = col
        iters += 1
    return ITERATION_LIMIT, iters
