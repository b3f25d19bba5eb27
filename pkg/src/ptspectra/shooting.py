"""Eigenvalues by shooting along two rays of the complex x plane.

Each ray starts deep inside a Stokes wedge, where the solution that decays
outward is fixed by its leading WKB behaviour psi'/psi = -sqrt(V - E).  Both
solutions are integrated inward to the match point and E is an eigenvalue when
their Wronskian vanishes there.
"""
from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _rk
from .errors import (
    ContractViolation,
    DegenerateContourError,
    InvalidInputError,
    NoConvergenceError,
    StalledError,
    StepSizeError,
    UnsupportedSpecError,
)

DOMINANCE = 100.0


@dataclass(frozen=True)
class ContourSpec:
    theta_right: float
    theta_left: float
    radius: float
    match_point: complex = 0j

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise InvalidInputError(f"ray length must be positive, got {self.radius}")
        d = cmath.exp(1j * self.theta_right) - cmath.exp(1j * self.theta_left)
        if abs(d) < 1e-12:
            raise InvalidInputError("the two rays coincide")

    def endpoint(self, theta: float) -> complex:
        return self.match_point + self.radius * cmath.exp(1j * theta)

    def with_radius(self, radius: float) -> "ContourSpec":
        return ContourSpec(self.theta_right, self.theta_left, radius, self.match_point)

    def rotated(self, d_right: float, d_left: float) -> "ContourSpec":
        return ContourSpec(
            self.theta_right + d_right, self.theta_left + d_left, self.radius, self.match_point
        )


@dataclass(frozen=True)
class ShootingConfig:
    tol: float = 1e-12
    energy_tol: float = 1e-11
    max_iter: int = 60
    renorm_interval: float = 0.25
    max_steps: int = 5_000_000

    def __post_init__(self):
        for name in ("tol", "energy_tol", "max_iter", "renorm_interval", "max_steps"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive")


@dataclass(frozen=True)
class WronskianValue:
    energy: complex
    value: complex


def _terms(spec):
    coefs = np.array([complex(c) for c, _ in spec.terms], dtype=np.complex128)
    powers = np.array([int(k) for _, k in spec.terms], dtype=np.int64)
    return coefs, powers


def dominance_radius(spec, e_max: float, factor: float = 1.25) -> float:
    """Ray length at which |leading term| exceeds DOMINANCE * e_max, times ``factor``."""
    e = max(abs(e_max), 1.0)
    return factor * (DOMINANCE * e / abs(spec.leading)) ** (1.0 / spec.degree)


def wedge_half_width(N: int) -> float:
    return math.pi / (N + 2)


def default_wedges(spec, e_max: float = 20.0) -> ContourSpec:
    """Rays through the centres of the two wedges used for the eigenproblem.

    Hermitian monomials (s > 0, N even) use the real axis.  Operators of the form
    c * -(ix)^N, c > 0, use the wedges continued from the harmonic oscillator,
    centred at -pi(N-2)/(2(N+2)) and its PT mirror.
    """
    if spec.is_hermitian():
        return ContourSpec(0.0, math.pi, dominance_radius(spec, e_max))
    scale = spec.pt_scale() if hasattr(spec, "pt_scale") else None
    if scale is None:
        raise UnsupportedSpecError(
            f"no default wedges for V = {spec.describe()}; supply the ray angles"
        )
    N = spec.N
    tr = -math.pi * (N - 2) / (2 * (N + 2))
    return ContourSpec(tr, -math.pi - tr, dominance_radius(spec, e_max))


def _ray(spec, contour, config, energy, theta):
    coefs, powers = _terms(spec)
    direction = cmath.exp(1j * theta)
    x0 = contour.endpoint(theta)
    v0 = complex(_rk.potential(x0, coefs, powers))
    if abs(v0) < DOMINANCE * abs(energy):
        raise ContractViolation(
            f"ray length {contour.radius:g} too short: |V(x0)| = {abs(v0):.3g} < "
            f"{DOMINANCE:g}|E| at theta = {theta:.6g}"
        )
    q = cmath.sqrt(v0 - energy)
    proj = (q * direction).real
    if abs(proj) <= 1e-8 * abs(q):
        raise DegenerateContourError(f"ray at theta = {theta:.6g} lies on a Stokes line")
    if proj < 0:
        q = -q
    psi, dpsi, status, _ = _rk.integrate_ray(
        coefs, powers, complex(energy), direction, complex(contour.match_point),
        float(contour.radius), 1.0 + 0j, -q, config.tol, config.renorm_interval,
        config.max_steps,
    )
    if status != _rk.OK:
        reason = {
            _rk.STEP_UNDERFLOW: "step size underflow",
            _rk.TOO_MANY_STEPS: "step budget exhausted",
            _rk.NON_FINITE: "solution overflowed",
        }[status]
        raise StepSizeError(f"{reason} on ray theta = {theta:.6g}, E = {energy}")
    return psi, dpsi


def wronskian(spec, contour: ContourSpec, config: ShootingConfig, E: complex) -> WronskianValue:
    """psi_L psi_R' - psi_R psi_L' at the match point, each branch of unit norm."""
    pr, dpr = _ray(spec, contour, config, E, contour.theta_right)
    pl, dpl = _ray(spec, contour, config, E, contour.theta_left)
    return WronskianValue(complex(E), complex(pl * dpr - pr * dpl))


def find_eigenvalue(spec, contour: ContourSpec, config: ShootingConfig, E_guess: complex,
                    E_second: complex | None = None) -> complex:
    """Complex secant iteration on W(E), started from ``E_guess``."""
    e0 = complex(E_guess)
    e1 = complex(E_second) if E_second is not None else e0 + 1e-3 * max(1.0, abs(e0))
    w0 = wronskian(spec, contour, config, e0).value
    for _ in range(config.max_iter):
        w1 = wronskian(spec, contour, config, e1).value
        if w1 == 0:
            return e1
        if w1 == w0:
            raise StalledError(f"secant stalled at E = {e1}")
        e2 = e1 - w1 * (e1 - e0) / (w1 - w0)
        if abs(e2 - e1) <= config.energy_tol:
            return e2
        e0, w0, e1 = e1, w1, e2
    raise NoConvergenceError(
        f"secant did not converge within {config.max_iter} iterations (last E = {e1})"
    )


@dataclass
class ShootingSpectrum:
    """Roots found from a set of seeds; ``failures`` lists seeds that failed."""

    values: list[complex]
    requested: int
    failures: list[tuple[complex, str]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return len(self.values) >= self.requested

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def _order(a: complex, b: complex, tie: float) -> int:
    # real parts within `tie` count as equal, so imaginary spectra sort by |Im|
    if abs(a.real - b.real) > tie:
        return -1 if a.real < b.real else 1
    ka, kb = (abs(a.imag), a.imag), (abs(b.imag), b.imag)
    return (ka > kb) - (ka < kb)


def spectrum(spec, contour: ContourSpec, config: ShootingConfig, count: int,
             seeds: Sequence[complex], dedup: float = 1e-6) -> ShootingSpectrum:
    """Lowest ``count`` distinct roots (by real part) reachable from ``seeds``.

    A seed whose secant iteration fails, or wanders past the energy the ray
    length supports, is recorded in ``failures`` instead of raising.
    """
    roots: list[complex] = []
    failures = []
    for seed in seeds:
        try:
            e = find_eigenvalue(spec, contour, config, seed)
        except (NoConvergenceError, StalledError, StepSizeError, ContractViolation) as exc:
            failures.append((complex(seed), str(exc)))
            continue
        if all(abs(e - r) > dedup for r in roots):
            roots.append(e)
    roots.sort(key=functools.cmp_to_key(lambda a, b: _order(a, b, dedup)))
    return ShootingSpectrum(roots[:count], count, failures)
