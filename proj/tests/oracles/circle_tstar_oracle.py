"""Dense reference values for the circle instance V(x) = cos x + 0.1.

Builds the periodic finite-difference pair (K, M) directly, solves the
generalized problem with scipy's dense `eigh`, and bisects on the coupling.
The printed numbers are frozen into tests/acceptance/acceptance.cpp and
tests/unit/test_tstar.cpp; rerun this script if the discretization changes.
"""

import numpy as np
from scipy.linalg import eigh


def lowest(n, length, potential, s):
    h = length / n
    stiffness = np.zeros((n, n))
    for i in range(n):
        stiffness[i, i] = 2.0 / h
        stiffness[i, (i + 1) % n] -= 1.0 / h
        stiffness[i, (i - 1) % n] -= 1.0 / h
    stiffness += np.diag(s * h * potential)
    mass = h * np.eye(n)
    return eigh(stiffness, mass, eigvals_only=True)[0]


def bisect(n, length, potential, lo=0.1, hi=0.4, iterations=80):
    assert lowest(n, length, potential, lo) > 0 > lowest(n, length, potential, hi)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if lowest(n, length, potential, mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


if __name__ == "__main__":
    length = 2.0 * np.pi
    for n in (256, 512):
        x = np.arange(n) * length / n
        v = np.cos(x) + 0.1
        print(f"n={n} lambda0(s=0.1)={lowest(n, length, v, 0.1)!r}")
        print(f"n={n} lambda0(s=1.0)={lowest(n, length, v, 1.0)!r}")
        print(f"n={n} t_star={bisect(n, length, v)!r}")
