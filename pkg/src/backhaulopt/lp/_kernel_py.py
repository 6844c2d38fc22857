"""Pure-Python simplex pivot loop, the fallback for the compiled kernel.

Operates on the same dense tableau layout as the Cython kernel and performs
the identical sequence of floating point operations (no fused multiply-add,
same rounding), so both kernels pivot identically and agree exactly.
"""

from __future__ import annotations

import numpy as np

KERNEL_NAME = "python"

# return codes shared with the compiled kernel
OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2


def run_pivots(tableau, basis, ncols_enter, tol, max_iter):
    """Run Bland-rule pivots on a minimization tableau until optimal.

    tableau: (m+1) x (n+1) float64 array; rows 0..m-1 are constraints with the
        right-hand side in the last column, row m is the reduced-cost row.
    basis: int64 array of m basic column indices, updated in place.
    ncols_enter: columns 0..ncols_enter-1 are eligible to enter the basis.
    Returns (code, pivots_performed).
    """
    T = tableau
    m = T.shape[0] - 1
    last = T.shape[1] - 1
    iters = 0
    while iters < max_iter:
        red = T[m, :ncols_enter]
        improving = np.flatnonzero(red < -tol)
        if improving.size == 0:
            return OPTIMAL, iters
        col = int(improving[0])  # Bland: smallest eligible index enters

        pivcol = T[:m, col]
        positive = np.flatnonzero(pivcol > tol)
        if positive.size == 0:
            return UNBOUNDED, iters
        ratios = T[positive, last] / pivcol[positive]
        best = ratios.min()
        ties = positive[ratios == best]
        row = int(ties[np.argmin(basis[ties])])  # Bland: smallest basic index leaves

        piv = T[row, col]
        T[row, :] /= piv
        factors = T[:, col].copy()
        factors[row] = 0.0
        T -= np.outer(factors, T[row, :])
        basis[row] = col
        iters += 1
    return ITERATION_LIMIT, iters
