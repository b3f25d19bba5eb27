"""Matrix elements of p^2 and x^N in the eigenbasis of p^2 + x^2.

The basis functions are the real, positively normalized Hermite functions
psi_n with (p^2 + x^2) psi_n = (2n + 1) psi_n, optionally dilated to
alpha^(1/2) psi_n(alpha x).  Matrices are returned as read-only complex128
numpy arrays.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimensionError, InvalidInputError


@dataclass(frozen=True)
class BasisConfig:
    M: int
    alpha: float = 1.0

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise InvalidDimensionError(f"truncation dimension must be >= 1, got {self.M}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvalidInputError(f"alpha must be positive and finite, got {self.alpha}")


def _check_dim(dim):
    if int(dim) != dim or dim < 1:
        raise InvalidDimensionError(f"matrix dimension must be >= 1, got {dim}")
    return int(dim)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


def _position_real(dim: int) -> np.ndarray:
    off = np.sqrt(np.arange(1, dim) / 2.0)
    return np.diag(off, 1) + np.diag(off, -1)


def position_matrix(dim: int) -> np.ndarray:
    """<m|x|n>: sqrt(n+1)/sqrt(2) on the subdiagonal, sqrt(n)/sqrt(2) above it."""
    dim = _check_dim(dim)
    return _frozen(_position_real(dim))


def momentum_squared_matrix(dim: int) -> np.ndarray:
    dim = _check_dim(dim)
    n = np.arange(dim, dtype=float)
    p2 = np.diag(n + 0.5)
    if dim > 2:
        off = -np.sqrt((n[:-2] + 1) * (n[:-2] + 2)) / 2.0
        p2 += np.diag(off, 2) + np.diag(off, -2)
    return _frozen(p2)


def power_matrix(dim: int, N: int) -> np.ndarray:
    """Exact top-left ``dim x dim`` block of the infinite matrix of x^N.

    x is built with ``N`` extra rows so that every ladder path contributing to
    the block stays inside the padded matrix.
    """
    dim = _check_dim(dim)
    if int(N) != N or N < 0:
        raise InvalidInputError(f"power must be a nonnegative integer, got {N}")
    N = int(N)
    if N == 0:
        return _frozen(np.eye(dim))
    x = _position_real(dim + N)
    out = x
    for _ in range(N - 1):
        out = out @ x
    return _frozen(out[:dim, :dim])


def hamiltonian_matrix(spec, config: BasisConfig) -> np.ndarray:
    """alpha^2 P + sum_k c_k alpha^(-k) X_k over the potential's monomials.

    ``spec`` is a :class:`~ptspectra.potential.PotentialSpec` or a
    :class:`~ptspectra.potential.PolynomialPotential`.
    """
    M, a = config.M, float(config.alpha)
    h = (a * a) * np.array(momentum_squared_matrix(M))
    for coef, k in spec.terms:
        h = h + complex(coef) * a ** (-k) * np.array(power_matrix(M, k))
    return _frozen(h)


def matrix_to_json(matrix: np.ndarray) -> str:
    """Row-major ``[re, im]`` dump used for golden files."""
    m = np.asarray(matrix)
    return json.dumps(
        {
            "dim": int(m.shape[0]),
            "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
        }
    )


def matrix_from_json(text: str) -> np.ndarray:
    data = json.loads(text)
    dim = int(data["dim"])
    vals = np.array([complex(re, im) for re, im in data["entries"]], dtype=np.complex128)
    if vals.size != dim * dim:
        raise InvalidInputError(f"expected {dim * dim} entries, got {vals.size}")
    return _frozen(vals.reshape(dim, dim))
