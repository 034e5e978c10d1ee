"""Non-pivoting Thomas solve.

Deliberately not scipy.linalg.solve_banded: LAPACK's gtsv pivots, and
pivoting breaks the argument that makes this solve sign-exact.  On an
M-matrix (off-diagonals <= 0, weakly dominant positive diagonal) with a
non-negative right-hand side, every intermediate quantity of the Thomas
recurrence is a sum, product, or quotient of non-negative numbers; there is
no cancellation anywhere, so the computed solution is non-negative exactly,
in floating point, not just up to roundoff.  The backward-Euler positivity
contract of the integrator rests on this.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def solve_tridiagonal(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve the tridiagonal system with bands (sub, diag, sup).

    sub[0] and sup[-1] are ignored.  No pivoting; the caller guarantees a
    (weakly) diagonally dominant matrix.
    """
    n = rhs.shape[0]
    c = np.empty(n)
    d = np.empty(n)
    c[0] = sup[0] / diag[0]
    d[0] = rhs[0] / diag[0]
    for i in range(1, n):
        m = diag[i] - sub[i] * c[i - 1]
        c[i] = sup[i] / m
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m
    x = np.empty(n)
    x[n - 1] = d[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x
