"""Symmetric tridiagonal eigensolver (implicit-shift QL).

Self-contained so the quadrature construction does not depend on an external
LAPACK contract.  Only the first row of the eigenvector matrix is accumulated,
which is all Golub-Welsch needs.
"""

import math

import numpy as np

from .errors import ConvergenceError

__all__ = ["tridiag_eigh_first_row"]

_MAX_SWEEPS = 60


def tridiag_eigh_first_row(diag, offdiag, tol=1e-14):
    """Eigenvalues of a symmetric tridiagonal matrix plus first eigenvector row.

    Parameters
    ----------
    diag : array of n diagonal entries.
    offdiag : array of n-1 sub/super-diagonal entries.
    tol : relative off-diagonal deflation threshold.

    Returns
    -------
    (values, first_row) with values ascending; first_row[i] is the first
    component of the normalized eigenvector belonging to values[i].
    """
    d = [float(v) for v in diag]
    n = len(d)
    e = [float(v) for v in offdiag]
    if len(e) != n - 1:
        raise ValueError("offdiag must have length len(diag)-1")
    e = e + [0.0]
    z = [0.0] * n
    if n:
        z[0] = 1.0

    for l in range(n):
        sweeps = 0
        while True:
            # locate a deflated (numerically zero) off-diagonal entry
            for m in range(l, n - 1):
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd:
                    break
            else:
                m = n - 1
            if m == l:
                break
            sweeps += 1
            if sweeps > _MAX_SWEEPS:
                raise ConvergenceError(
                    f"QL iteration failed to deflate row {l} of {n} "
                    f"after {_MAX_SWEEPS} sweeps"
                )
            # implicit shift from the 2x2 block at l
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # recover from underflow: split the matrix here
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                # apply the rotation to the tracked first row
                zi1 = z[i + 1]
                z[i + 1] = s * z[i] + c * zi1
                z[i] = c * z[i] - s * zi1
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0

    values = np.asarray(d, dtype=float)
    row = np.asarray(z, dtype=float)
    order = np.argsort(values, kind="stable")
    return values[order], row[order]
