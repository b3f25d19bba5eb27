"""Independent reference computations used by the tests."""
import math

import mpmath
import numpy as np
from numpy.polynomial import hermite as H


def hermite_function_coeffs(n: int) -> np.ndarray:
    """Physicists' Hermite coefficients of psi_n, normalized so that
    psi_n(x) = poly(x) * exp(-x^2/2) has unit L2 norm."""
    c = np.zeros(n + 1)
    c[n] = 1.0 / math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi))
    return c


def gauss_hermite_power(m: int, n: int, N: int, nodes: int = 80) -> float:
    """<m| x^N |n> by Gauss-Hermite quadrature (exact for these degrees)."""
    x, w = H.hermgauss(nodes)
    pm = H.hermval(x, hermite_function_coeffs(m))
    pn = H.hermval(x, hermite_function_coeffs(n))
    return float(np.sum(w * pm * pn * x**N))


def gauss_hermite_p2(m: int, n: int, nodes: int = 80) -> float:
    """<m| p^2 |n> = integral of psi_m' psi_n' using d/dx [h(x) e^{-x^2/2}] = (h' - x h) e^{-x^2/2}."""
    x, w = H.hermgauss(nodes)

    def deriv(k):
        c = hermite_function_coeffs(k)
        return H.hermval(x, H.hermder(c)) - x * H.hermval(x, c)

    return float(np.sum(w * deriv(m) * deriv(n)))


def mp_det(a: np.ndarray, lam: complex, dps: int = 40):
    """|det(A - lam I)| in extended precision."""
    with mpmath.workdps(dps):
        m = mpmath.matrix(a.tolist())
        for i in range(a.shape[0]):
            m[i, i] -= mpmath.mpc(lam.real, lam.imag)
        return abs(mpmath.det(m))


def hyman_det(h: np.ndarray, lam: complex) -> complex:
    """det(H - lam I) for upper Hessenberg H via Hyman's recurrence."""
    n = h.shape[0]
    a = h - lam * np.eye(n)
    # solve for x with x[n-1] = 1 such that rows 1..n-1 of (A x) vanish
    x = np.zeros(n, dtype=complex)
    x[n - 1] = 1.0
    for i in range(n - 1, 0, -1):
        s = a[i, i:] @ x[i:]
        x[i - 1] = -s / a[i, i - 1]
    r = a[0] @ x
    return r * (-1) ** (n - 1) * np.prod(np.diag(a, -1))
