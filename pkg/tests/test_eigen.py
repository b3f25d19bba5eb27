import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from ptspectra.basis import BasisConfig, hamiltonian_matrix
from ptspectra.eigen import balance, eigenvalues, hermitian_eigenvalues, hessenberg
from ptspectra.errors import ContractViolation, InvalidInputError, SolverFailure
from ptspectra.potential import PotentialSpec

from oracles import hyman_det, mp_det


def random_matrix(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def match_sets(a, b):
    """Max over a of distance to the nearest unused element of b."""
    b = list(b)
    worst = 0.0
    for z in a:
        k = int(np.argmin([abs(z - w) for w in b]))
        worst = max(worst, abs(z - b.pop(k)))
    return worst


@pytest.mark.parametrize("a,expected", [
    (np.diag([1.0, 2.0, 3.0]), [1, 2, 3]),
    ([[0, 1], [1, 0]], [-1, 1]),
    ([[0, 1], [-1, 0]], [-1j, 1j]),
    ([[5.0]], [5]),
])
def test_examples(a, expected):
    vals = eigenvalues(a).values
    assert np.allclose(vals, expected, atol=1e-14)


def test_hyman_determinant_oracle():
    rng = np.random.default_rng(6)
    a = random_matrix(rng, 6)
    h = scipy.linalg.hessenberg(a)
    scale = np.linalg.norm(a, 2) ** 6
    for lam in eigenvalues(a):
        assert abs(hyman_det(h, lam)) <= 1e-10 * scale


def test_output_sorted_and_complete():
    rng = np.random.default_rng(1)
    a = random_matrix(rng, 25)
    vals = eigenvalues(a).values
    assert len(vals) == 25
    keys = list(zip(vals.real, vals.imag))
    assert keys == sorted(keys)


def test_repeated_eigenvalues():
    j = np.diag([2.0] * 4) + np.diag([1.0] * 3, 1)  # Jordan block
    vals = eigenvalues(j).values
    assert np.allclose(vals, 2.0, atol=1e-3)
    assert abs(np.mean(vals) - 2.0) < 1e-12
    assert np.allclose(eigenvalues(np.eye(7)).values, 1.0, atol=1e-15)


def test_zero_and_triangular():
    assert np.all(eigenvalues(np.zeros((5, 5))).values == 0)
    t = np.triu(np.arange(1, 17, dtype=float).reshape(4, 4))
    assert np.allclose(eigenvalues(t).values, [1, 6, 11, 16], atol=1e-13)


def test_balancing_handles_bad_scaling():
    rng = np.random.default_rng(3)
    a = random_matrix(rng, 12)
    d = np.diag(2.0 ** rng.integers(-20, 20, 12))
    b = np.linalg.solve(d, a @ d)
    ref = eigenvalues(a).values
    assert match_sets(eigenvalues(b).values, ref) <= 1e-9 * np.max(np.abs(ref))


def test_balance_and_hessenberg_are_similarities():
    rng = np.random.default_rng(4)
    a = random_matrix(rng, 10)
    b = a.copy()
    balance(b)
    hessenberg(b)
    assert np.allclose(np.tril(b, -2), 0)
    assert abs(np.trace(b) - np.trace(a)) < 1e-12 * np.linalg.norm(a)


def test_unbalanced_mode():
    rng = np.random.default_rng(5)
    a = random_matrix(rng, 15)
    assert match_sets(eigenvalues(a, balanced=False).values, np.linalg.eigvals(a)) < 1e-11


def test_lapack_agreement_on_operator_matrices():
    h = hamiltonian_matrix(PotentialSpec(1j, 3), BasisConfig(60))
    ours = eigenvalues(h).values
    ref = np.linalg.eigvals(np.asarray(h))
    assert match_sets(ours, ref) <= 1e-10 * np.max(np.abs(ref))


@pytest.mark.parametrize("bad", [np.nan, np.inf])
def test_non_finite_rejected(bad):
    a = np.eye(3)
    a[1, 2] = bad
    with pytest.raises(InvalidInputError):
        eigenvalues(a)


@pytest.mark.parametrize("shape", [(0, 0), (2, 3), (4,)])
def test_bad_shape_rejected(shape):
    with pytest.raises(InvalidInputError):
        eigenvalues(np.zeros(shape))


def test_sweep_cap_raises_solver_failure():
    rng = np.random.default_rng(7)
    with pytest.raises(SolverFailure) as info:
        eigenvalues(random_matrix(rng, 20), max_sweeps=3)
    assert 0 <= info.value.deflated < 20


def test_max_residual_small():
    rng = np.random.default_rng(8)
    res = eigenvalues(random_matrix(rng, 30))
    assert 0 <= res.max_residual <= 1e-14


def test_hermitian_examples():
    vals = hermitian_eigenvalues(np.diag([5.0, 1.0, 3.0])).values
    assert list(vals) == [1, 3, 5] and np.all(vals.imag == 0)
    h = hamiltonian_matrix(PotentialSpec(1, 2), BasisConfig(8))
    assert np.allclose(hermitian_eigenvalues(h).values, np.arange(1, 16, 2), atol=1e-13)


def test_hermitian_rejects_non_hermitian():
    with pytest.raises(ContractViolation):
        hermitian_eigenvalues([[1, 2], [0, 1]])
    with pytest.raises(ContractViolation):
        hermitian_eigenvalues(hamiltonian_matrix(PotentialSpec(1j, 3), BasisConfig(6)))


def test_hermitian_quartic_variational():
    spec = PotentialSpec(1, 4)
    w = [hermitian_eigenvalues(hamiltonian_matrix(spec, BasisConfig(M))).values[0].real
         for M in (10, 20, 30, 40)]
    assert all(a >= b - 1e-12 for a, b in zip(w, w[1:]))
    assert w[-1] >= 1.0603620904841829 - 1e-12  # E0 of p^2 + x^4 from a large-M ladder


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_characteristic_polynomial_residual(n, seed):
    a = random_matrix(np.random.default_rng(seed), n)
    norm = max(1.0, np.linalg.norm(a, 2))
    for lam in eigenvalues(a):
        assert float(mp_det(a, lam)) <= 1e-8 * norm**n


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 40), seed=st.integers(0, 2**32 - 1))
def test_trace_and_similarity(n, seed):
    rng = np.random.default_rng(seed)
    a = random_matrix(rng, n)
    vals = eigenvalues(a).values
    tr = np.trace(a)
    assert abs(vals.sum() - tr) <= 1e-9 * (1 + abs(tr))
    d = rng.uniform(0.5, 2.0, n)
    b = (a * d[None, :]) / d[:, None]
    assert match_sets(eigenvalues(b).values, vals) <= 1e-9 * max(1.0, np.max(np.abs(vals)))


@settings(max_examples=10, deadline=None)
@given(n=st.integers(1, 30), seed=st.integers(0, 2**32 - 1))
def test_determinism(n, seed):
    a = random_matrix(np.random.default_rng(seed), n)
    first = eigenvalues(a).values
    assert first.tobytes() == eigenvalues(a.copy()).values.tobytes()
