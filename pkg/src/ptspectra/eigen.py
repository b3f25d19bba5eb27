"""Dense eigenvalues of complex, generally non-normal matrices.

Balancing, Householder reduction to upper Hessenberg form, then single-shift
complex QR sweeps with deflation.  Only eigenvalues are produced; no Schur
vectors are accumulated, so each sweep touches the active window only.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InvalidInputError, SolverFailure

_EPS = np.finfo(float).eps
_EXCEPTIONAL_EVERY = 10


@dataclass(frozen=True)
class EigenvalueSet:
    """All eigenvalues of one matrix, sorted by (Re, Im).

    ``max_residual`` is the largest subdiagonal entry that was set to zero
    during deflation, relative to the Frobenius norm of the Hessenberg
    matrix. It bounds the backward error committed by deflation.
    """

    values: np.ndarray
    max_residual: float

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


def _as_square(matrix) -> np.ndarray:
    a = np.array(matrix, dtype=np.complex128, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInputError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix contains NaN or Inf")
    return a


def balance(a: np.ndarray) -> np.ndarray:
    """Diagonal similarity scaling by powers of two (Parlett-Reinsch), in place."""
    n = a.shape[0]
    radix = 2.0
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = np.abs(a[:, i]).sum() - abs(a[i, i])
            r = np.abs(a[i, :]).sum() - abs(a[i, i])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                converged = False
                a[i, :] /= f
                a[:, i] *= f
    return a


def hessenberg(a: np.ndarray) -> np.ndarray:
    """Unitary similarity reduction to upper Hessenberg form, in place."""
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1 :, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = x.copy()
        v[0] += phase * xnorm
        v /= np.linalg.norm(v)
        a[k + 1 :, k:] -= 2.0 * np.outer(v, v.conj() @ a[k + 1 :, k:])
        a[:, k + 1 :] -= 2.0 * np.outer(a[:, k + 1 :] @ v, v.conj())
        a[k + 2 :, k] = 0.0
    return a


def _cabs1(z) -> float:
    return abs(z.real) + abs(z.imag)


def _eig2(p, q, r, t):
    """Eigenvalues of [[p, q], [r, t]], the second being the one nearer ``t``."""
    half = 0.5 * (p - t)
    disc = cmath.sqrt(half * half + q * r)
    mid = 0.5 * (p + t)
    big = mid + disc if abs(mid + disc) >= abs(mid - disc) else mid - disc
    det = p * t - q * r
    small = det / big if big != 0 else mid
    if abs(big - t) < abs(small - t):
        return small, big
    return big, small


def _givens(x, y):
    """Return (c, s, r) with [[c, s], [-conj(s), c]] @ [x, y] = [r, 0], c real."""
    ax = abs(x)
    if ax == 0.0:
        return 0.0, 1.0 + 0j, y
    norm = np.hypot(ax, abs(y))
    ph = x / ax
    return ax / norm, ph * np.conj(y) / norm, ph * norm


def _qr_sweep(h: np.ndarray, lo: int, hi: int, shift: complex) -> None:
    x = h[lo, lo] - shift
    y = h[lo + 1, lo]
    for k in range(lo, hi):
        if k > lo:
            x = h[k, k - 1]
            y = h[k + 1, k - 1]
        c, s, r = _givens(x, y)
        if k > lo:
            h[k, k - 1] = r
            h[k + 1, k - 1] = 0.0
        row_k = h[k, k : hi + 1].copy()
        row_k1 = h[k + 1, k : hi + 1]
        h[k, k : hi + 1] = c * row_k + s * row_k1
        h[k + 1, k : hi + 1] = -np.conj(s) * row_k + c * row_k1
        stop = min(k + 3, hi + 1)
        col_k = h[lo:stop, k].copy()
        col_k1 = h[lo:stop, k + 1]
        h[lo:stop, k] = c * col_k + np.conj(s) * col_k1
        h[lo:stop, k + 1] = -s * col_k + c * col_k1


def hessenberg_qr(h: np.ndarray, max_sweeps: int | None = None):
    """Eigenvalues of an upper Hessenberg matrix (modified in place).

    Returns ``(values, max_neglected)`` in deflation order.
    """
    n = h.shape[0]
    cap = max_sweeps if max_sweeps is not None else 30 * max(n, 10)
    hnorm = np.linalg.norm(h)
    tiny = np.finfo(float).tiny / _EPS
    found: list[complex] = []
    neglected = 0.0
    sweeps = 0
    its = 0
    hi = n - 1
    while hi >= 0:
        if hi == 0:
            found.append(complex(h[0, 0]))
            break
        lo = hi
        while lo > 0:
            sub = _cabs1(h[lo, lo - 1])
            scale = _cabs1(h[lo - 1, lo - 1]) + _cabs1(h[lo, lo])
            if scale == 0.0:
                scale = hnorm
            if sub <= max(_EPS * scale, tiny):
                neglected = max(neglected, abs(h[lo, lo - 1]))
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            found.append(complex(h[hi, hi]))
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            e1, e2 = _eig2(h[lo, lo], h[lo, hi], h[hi, lo], h[hi, hi])
            found.extend((complex(e2), complex(e1)))
            hi -= 2
            its = 0
            continue
        if sweeps >= cap:
            raise SolverFailure(
                f"QR iteration did not converge after {sweeps} sweeps", deflated=len(found)
            )
        its += 1
        sweeps += 1
        if its % _EXCEPTIONAL_EVERY == 0:
            shift = h[hi, hi] + 0.75 * _cabs1(h[hi, hi - 1])
        else:
            _, shift = _eig2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        _qr_sweep(h, lo, hi, shift)
    rel = neglected / hnorm if hnorm > 0 else 0.0
    return found, rel


def _sorted(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.complex128)
    order = np.lexsort((v.imag, v.real))
    return v[order]


def eigenvalues(matrix, balanced: bool = True, max_sweeps: int | None = None) -> EigenvalueSet:
    """All eigenvalues of a square complex matrix.

    Raises :class:`InvalidInputError` for non-finite input and
    :class:`SolverFailure` when the sweep cap (default ``30 * dim``) is hit.
    """
    a = _as_square(matrix)
    if a.shape[0] == 1:
        return EigenvalueSet(a[0].copy(), 0.0)
    if balanced:
        balance(a)
    hessenberg(a)
    vals, resid = hessenberg_qr(a, max_sweeps=max_sweeps)
    return EigenvalueSet(_sorted(vals), float(resid))


def hermitian_eigenvalues(matrix, balanced: bool = False) -> EigenvalueSet:
    """Eigenvalues of a Hermitian matrix as exact reals, ascending."""
    a = _as_square(matrix)
    scale = max(1.0, float(np.max(np.abs(a))))
    asym = float(np.max(np.abs(a - a.conj().T)))
    if asym > 1e-12 * scale:
        raise ContractViolation(f"matrix is not Hermitian (max |A - A^H| = {asym:.3e})")
    res = eigenvalues(a, balanced=balanced)
    vals = res.values
    bad = np.abs(vals.imag) >= 1e-10 * (1 + np.abs(vals))
    if np.any(bad):
        raise ContractViolation(
            f"Hermitian input produced eigenvalues with imaginary parts up to "
            f"{np.max(np.abs(vals.imag)):.3e}"
        )
    real = np.sort(vals.real).astype(np.complex128)
    return EigenvalueSet(real, res.max_residual)
