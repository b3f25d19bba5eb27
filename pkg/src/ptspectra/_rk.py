"""Compiled Dormand-Prince 5(4) integrator for psi'' = (V - E) psi along a ray."""
import numpy as np
from numba import njit

# Butcher tableau (Dormand & Prince 1980); the 7th stage is FSAL.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.zeros((7, 7))
_A[1, :1] = [1 / 5]
_A[2, :2] = [3 / 40, 9 / 40]
_A[3, :3] = [44 / 45, -56 / 15, 32 / 9]
_A[4, :4] = [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]
_A[5, :5] = [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]
_A[6, :6] = [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

OK = 0
STEP_UNDERFLOW = 1
TOO_MANY_STEPS = 2
NON_FINITE = 3


@njit(cache=True)
def potential(x, coefs, powers):
    total = 0j
    for i in range(coefs.size):
        p = 1.0 + 0j
        for _ in range(powers[i]):
            p *= x
        total += coefs[i] * p
    return total


@njit(cache=True)
def integrate_ray(coefs, powers, energy, direction, origin, radius, psi0, dpsi0,
                  tol, renorm, max_steps):
    """Integrate from ``origin + radius*direction`` back to ``origin``.

    Arc length r runs from ``radius`` down to 0; x(r) = origin + r*direction.
    Returns (psi, dpsi, status, steps) with (psi, dpsi) scaled to unit norm.
    """
    C, A, E = _C, _A, _E
    k0 = np.empty(7, np.complex128)
    k1 = np.empty(7, np.complex128)
    psi = psi0
    dpsi = dpsi0
    r = radius
    x = origin + r * direction
    q = abs(potential(x, coefs, powers) - energy) ** 0.5
    h = -min(0.05 * radius, 0.1 / (1.0 + q))
    hmin = 1e-14 * radius
    next_renorm = radius - renorm
    f0 = direction * dpsi
    f1 = direction * (potential(x, coefs, powers) - energy) * psi
    steps = 0
    while r > 0.0:
        if steps >= max_steps:
            return psi, dpsi, TOO_MANY_STEPS, steps
        if r + h < 0.0:
            h = -r
        k0[0] = f0
        k1[0] = f1
        y0 = psi
        y1 = dpsi
        for s in range(1, 7):
            y0 = psi
            y1 = dpsi
            for j in range(s):
                y0 += h * A[s, j] * k0[j]
                y1 += h * A[s, j] * k1[j]
            xs = origin + (r + C[s] * h) * direction
            k0[s] = direction * y1
            k1[s] = direction * (potential(xs, coefs, powers) - energy) * y0
        e0 = 0j
        e1 = 0j
        for j in range(7):
            e0 += h * E[j] * k0[j]
            e1 += h * E[j] * k1[j]
        scale = max((abs(psi) ** 2 + abs(dpsi) ** 2) ** 0.5, (abs(y0) ** 2 + abs(y1) ** 2) ** 0.5)
        err = (abs(e0) ** 2 + abs(e1) ** 2) ** 0.5 / (tol * scale)
        if not np.isfinite(err):
            return psi, dpsi, NON_FINITE, steps
        if err <= 1.0:
            r += h
            psi = y0
            dpsi = y1
            f0 = k0[6]
            f1 = k1[6]
            steps += 1
            if r <= next_renorm:
                nrm = (abs(psi) ** 2 + abs(dpsi) ** 2) ** 0.5
                psi /= nrm
                dpsi /= nrm
                f0 /= nrm
                f1 /= nrm
                next_renorm -= renorm
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            fac = max(0.2, 0.9 * err ** -0.2)
        h *= fac
        if abs(h) < hmin and r > 0.0:
            return psi, dpsi, STEP_UNDERFLOW, steps
    nrm = (abs(psi) ** 2 + abs(dpsi) ** 2) ** 0.5
    return psi / nrm, dpsi / nrm, OK, steps
