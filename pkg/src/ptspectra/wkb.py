"""Leading-order WKB (Bohr-Sommerfeld) estimates for monomial potentials.

Two routes are provided and are expected to agree to near machine precision:
a closed form in Gamma functions, and direct quadrature of the action
integral between the PT-symmetric pair of turning points.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import NumericalError, UnsupportedSpecError


@dataclass(frozen=True)
class WkbEstimate:
    n: int
    energy: float
    method: str  # "closed-form" or "quadrature"


def _family(spec):
    """("hermitian" | "pt", strength c) with V = c x^N or V = -c (ix)^N."""
    if spec.is_hermitian():
        return "hermitian", spec.s.real
    scale = spec.pt_scale() if hasattr(spec, "pt_scale") else None
    if scale is None:
        raise UnsupportedSpecError(
            f"WKB estimates cover c x^N (N even) and -c (ix)^N only, not {spec.describe()}"
        )
    return "pt", scale


def _check_n(n):
    if int(n) != n or n < 0:
        raise ValueError(f"quantum number must be a nonnegative integer, got {n}")
    return int(n)


def wkb_closed_form(spec, n: int) -> WkbEstimate:
    n = _check_n(n)
    family, c = _family(spec)
    N = spec.N
    g = math.gamma
    base = (n + 0.5) * math.sqrt(math.pi) * g(1.5 + 1.0 / N) / g(1.0 + 1.0 / N)
    if family == "pt":
        base /= math.sin(math.pi / N)
    energy = c ** (2.0 / (N + 2)) * base ** (2.0 * N / (N + 2))
    return WkbEstimate(n, energy, "closed-form")


def turning_points(spec, E: float) -> tuple[complex, complex]:
    """(x_minus, x_plus): the roots of V(x) = E forming a PT-mirror pair."""
    family, _ = _family(spec)
    N = spec.N
    roots = [(E / spec.s) ** (1.0 / N) * cmath.exp(2j * math.pi * k / N) for k in range(N)]
    target = 0.0 if family == "hermitian" else -math.pi * (0.5 - 1.0 / N)
    x_plus = min(roots, key=lambda z: abs(cmath.phase(z) - target))
    x_minus = -x_plus.conjugate()
    for x in (x_plus, x_minus):
        if abs(spec(x) - E) > 1e-10 * max(1.0, abs(E)):
            raise NumericalError(f"turning point {x} does not solve V(x) = {E}")
    return x_minus, x_plus


def action(spec, E: float, nodes: int = 256) -> complex:
    """Integral of sqrt(E - V) over the straight chord joining the turning points.

    t = sin(phi) removes the square-root endpoint singularities, so plain
    Gauss-Legendre in phi converges exponentially.  The square root is
    continued node by node from the chord midpoint, where it is positive.
    """
    x_minus, x_plus = turning_points(spec, E)
    mid = 0.5 * (x_plus + x_minus)
    half = 0.5 * (x_plus - x_minus)
    u, w = np.polynomial.legendre.leggauss(nodes)
    phi = 0.5 * math.pi * u
    weights = 0.5 * math.pi * w * np.cos(phi)
    x = mid + np.sin(phi) * half
    radicand = E - spec(x)
    roots = np.sqrt(radicand.astype(np.complex128))

    centre = math.sqrt((E - spec(mid)).real) if abs((E - spec(mid)).imag) < 1e-12 * E else None
    if centre is None or centre <= 0:
        raise NumericalError("integrand is not positive at the chord midpoint")
    start = int(np.argmin(np.abs(phi)))
    if abs(roots[start] - centre) > abs(roots[start] + centre):
        roots[start] = -roots[start]
    for step in (1, -1):
        k = start + step
        while 0 <= k < nodes:
            if abs(roots[k] - roots[k - step]) > abs(roots[k] + roots[k - step]):
                roots[k] = -roots[k]
            k += step
    return complex(np.sum(weights * roots) * half)


def wkb_quadrature(spec, n: int, nodes: int = 256) -> WkbEstimate:
    """Solve Re(action(E)) = (n + 1/2) pi by bracketing and Brent's method."""
    n = _check_n(n)
    if nodes < 200:
        raise ValueError("use at least 200 quadrature nodes")
    target = (n + 0.5) * math.pi

    def f(E):
        return action(spec, E, nodes).real - target

    lo, hi = 1e-8, 1.0
    while f(hi) < 0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            raise NumericalError("could not bracket the quantization condition")
    E = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    S = action(spec, E, nodes)
    if abs(S.imag) > 1e-8 * abs(S):
        raise NumericalError(f"action has imaginary part {S.imag:.3e} at E = {E}")
    return WkbEstimate(n, float(E), "quadrature")
