"""Independent reference computations used by the tests.

Eigenvalues come from the characteristic polynomial (Faddeev-LeVerrier
recursion in 50-digit arithmetic) and mpmath's polynomial root finder, so
they share no code with LAPACK.
"""

import mpmath
import numpy as np
from scipy.optimize import linear_sum_assignment


def charpoly(a, dps=50):
    """Coefficients of det(x I - A), highest power first."""
    mpmath.mp.dps = dps
    n = a.shape[0]
    m = mpmath.matrix([[mpmath.mpc(complex(x)) for x in row] for row in a])
    eye = mpmath.eye(n)
    coeffs = [mpmath.mpc(1)]
    mk = mpmath.zeros(n, n)
    for k in range(1, n + 1):
        mk = m * mk + coeffs[-1] * eye
        am = m * mk
        coeffs.append(-sum(am[i, i] for i in range(n)) / k)
    return coeffs


def charpoly_roots(a, dps=50):
    roots = mpmath.polyroots(charpoly(a, dps), maxsteps=500, extraprec=300)
    vals = np.array([complex(r) for r in roots])
    return vals[np.lexsort((vals.imag, vals.real))]


def match_distance(x, y):
    """Max distance of the optimal one-to-one matching between two multisets."""
    c = np.abs(np.asarray(x)[:, None] - np.asarray(y)[None, :])
    r, k = linear_sum_assignment(c)
    return float(c[r, k].max())
