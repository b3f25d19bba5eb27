import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptspectra.basis import (
    BasisConfig,
    hamiltonian_matrix,
    matrix_from_json,
    matrix_to_json,
    momentum_squared_matrix,
    position_matrix,
    power_matrix,
)
from ptspectra.errors import InvalidDimensionError, InvalidInputError
from ptspectra.potential import PolynomialPotential, PotentialSpec

from oracles import gauss_hermite_p2, gauss_hermite_power


def test_position_examples():
    assert position_matrix(2)[0, 1] == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert position_matrix(3)[1, 2] == pytest.approx(1.0, abs=1e-15)
    x = position_matrix(5)
    assert np.array_equal(x, x.T)


def test_momentum_examples():
    assert momentum_squared_matrix(1)[0, 0] == pytest.approx(0.5, abs=1e-15)
    p = momentum_squared_matrix(3)
    assert p[0, 2] == pytest.approx(-math.sqrt(2) / 2, abs=1e-15)
    assert p[0, 0] + power_matrix(3, 2)[0, 0] == pytest.approx(1.0, abs=1e-15)


def test_power_examples():
    assert power_matrix(2, 3)[0, 1] == pytest.approx(3 / (2 * math.sqrt(2)), abs=1e-14)
    assert power_matrix(1, 2)[0, 0] == pytest.approx(0.5, abs=1e-15)
    assert power_matrix(4, 3)[0, 0] == 0


def test_hamiltonian_examples():
    h = hamiltonian_matrix(PotentialSpec(1, 2), BasisConfig(5))
    assert np.allclose(h, np.diag([1, 3, 5, 7, 9]), atol=1e-14)
    h = hamiltonian_matrix(PotentialSpec(1j, 3), BasisConfig(2))
    assert h[0, 1] == pytest.approx(1.06066017178j, abs=1e-11)
    h = hamiltonian_matrix(PotentialSpec(1, 2), BasisConfig(1, alpha=2))
    assert h[0, 0] == pytest.approx(2.125, abs=1e-15)


@pytest.mark.parametrize("fn", [position_matrix, momentum_squared_matrix])
def test_zero_dimension_rejected(fn):
    with pytest.raises(InvalidDimensionError):
        fn(0)


def test_power_zero_dimension_rejected():
    with pytest.raises(InvalidDimensionError):
        power_matrix(0, 3)


@pytest.mark.parametrize("M,alpha", [(0, 1.0), (3, 0.0), (3, -1.0), (3, float("inf")), (3, float("nan"))])
def test_basis_config_validation(M, alpha):
    with pytest.raises((InvalidDimensionError, InvalidInputError)):
        BasisConfig(M, alpha)


def test_quadrature_oracle_power():
    for N in range(0, 7):
        x = power_matrix(10, N)
        for m in range(10):
            for n in range(10):
                assert abs(x[m, n] - gauss_hermite_power(m, n, N)) <= 1e-10


def test_quadrature_oracle_momentum():
    p = momentum_squared_matrix(10)
    for m in range(10):
        for n in range(10):
            assert abs(p[m, n] - gauss_hermite_p2(m, n)) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(dim=st.integers(1, 40), N=st.integers(1, 8))
def test_padding_exactness(dim, N):
    small = power_matrix(dim, N)
    big = power_matrix(dim + 10, N)
    assert np.max(np.abs(big[:dim, :dim] - small)) <= 1e-13 * max(1.0, np.max(np.abs(small)))


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(1, 30), N=st.integers(1, 8))
def test_band_structure(dim, N):
    x = power_matrix(dim, N)
    m, n = np.indices(x.shape)
    zero = (np.abs(m - n) > N) | ((m - n - N) % 2 != 0)
    assert np.all(x[zero] == 0)


@pytest.mark.parametrize("alpha", [0.5, 1.4, 2.0])
@pytest.mark.parametrize("s,N", [(1j, 3), (-1, 4), (1, 6), (2 - 1j, 5)])
def test_scaling_law(alpha, s, N):
    M = 12
    h = hamiltonian_matrix(PotentialSpec(s, N), BasisConfig(M, alpha))
    ref = alpha**2 * momentum_squared_matrix(M) + s * alpha ** (-N) * power_matrix(M, N)
    assert np.max(np.abs(h - ref)) <= 1e-13 * np.max(np.abs(ref))


@pytest.mark.parametrize("N", [2, 4, 6, 8])
def test_hermiticity(N):
    h = hamiltonian_matrix(PotentialSpec(1, N), BasisConfig(30, 1.3))
    assert np.max(np.abs(h - h.conj().T)) <= 1e-14 * max(1.0, np.max(np.abs(h)))


def test_multiterm_sum():
    pot = PolynomialPotential(((4, 4), (-2, 1)))
    h = hamiltonian_matrix(pot, BasisConfig(8))
    ref = momentum_squared_matrix(8) + 4 * power_matrix(8, 4) - 2 * power_matrix(8, 1)
    assert np.allclose(h, ref, atol=1e-13)


def test_matrices_are_immutable():
    h = hamiltonian_matrix(PotentialSpec(1j, 3), BasisConfig(4))
    with pytest.raises(ValueError):
        h[0, 0] = 1.0


def test_json_round_trip():
    h = hamiltonian_matrix(PotentialSpec(1j, 3), BasisConfig(6, 1.4))
    text = matrix_to_json(h)
    doc = json.loads(text)
    assert doc["dim"] == 6 and len(doc["entries"]) == 36
    assert doc["entries"][1] == [h[0, 1].real, h[0, 1].imag]
    assert np.array_equal(matrix_from_json(text), h)
