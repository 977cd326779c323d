import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ea_atlas.linalg import (
    ConvergenceError,
    DimPair,
    default_tol,
    gell_mann_basis,
    hermitian_eig,
    jacobi_eigh,
    kron,
    max_entangled,
    partial_trace,
    partial_transpose,
    product_basis,
    projector,
    random_density,
    random_hermitian,
    random_unit_vector,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
seeds = st.integers(0, 2**32 - 1)
dims_st = st.tuples(st.integers(2, 4), st.integers(2, 4)).map(lambda t: DimPair(*t))


def test_dimpair_validation():
    with pytest.raises(ValueError):
        DimPair(1, 3)
    assert DimPair.parse("3x2") == DimPair(3, 2)
    assert DimPair(3, 2).total == 6
    with pytest.raises(ValueError):
        DimPair.parse("3")


def test_kron_small_cases():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    out = kron(np.diag([1, 0]), np.diag([0, 1]))
    assert np.array_equal(out, np.diag([0, 1, 0, 0]))
    psi = max_entangled(2)
    assert np.allclose(kron(SX, SX) @ psi, psi, atol=1e-15)


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_kron_associative(seed):
    r = np.random.default_rng(seed)
    # Gaussian-integer entries keep every product exact
    a, b, c = (r.integers(-9, 9, (2, 2)) + 1j * r.integers(-9, 9, (2, 2)) for _ in range(3))
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))


@pytest.mark.parametrize("d", [2, 3, 5])
def test_mes_marginal(d):
    p = projector(max_entangled(d))
    assert np.allclose(partial_trace(p, DimPair(d, d), "A"), np.eye(d) / d, atol=1e-12)
    assert np.allclose(partial_trace(p, DimPair(d, d), "B"), np.eye(d) / d, atol=1e-12)


@given(dims_st, seeds)
@settings(max_examples=50, deadline=None)
def test_partial_trace_of_product(dims, seed):
    a = random_hermitian(dims.dA, seed)
    b = random_hermitian(dims.dB, seed + 1)
    m = kron(a, b)
    assert np.allclose(partial_trace(m, dims, "A"), np.trace(b) * a, atol=1e-12)
    assert np.allclose(partial_trace(m, dims, "B"), np.trace(a) * b, atol=1e-12)
    assert abs(np.trace(partial_trace(m, dims, "A")) - np.trace(m)) <= 1e-12


@given(dims_st, seeds)
@settings(max_examples=50, deadline=None)
def test_partial_transpose_identities(dims, seed):
    m = random_density(dims.total, seed)
    for which in "AB":
        pt = partial_transpose(m, dims, which)
        assert np.array_equal(partial_transpose(pt, dims, which), m)
        assert abs(np.trace(pt) - np.trace(m)) <= 1e-12
        assert np.allclose(pt, pt.conj().T, atol=1e-12)
    a, b = random_density(dims.dA, seed), random_density(dims.dB, seed + 7)
    assert np.allclose(partial_transpose(kron(a, b), dims, "B"), kron(a, b.T), atol=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_mes_partial_transpose_spectrum(d):
    w, _ = hermitian_eig(partial_transpose(projector(max_entangled(d)), DimPair(d, d)))
    assert abs(w[0] + 1 / d) <= 1e-12
    assert abs(w[-1] - 1 / d) <= 1e-12


def test_hermitian_eig_examples():
    w, _ = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [1, 2, 3])
    w, _ = hermitian_eig(SX)
    assert np.allclose(w, [-1, 1])
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_isotropic_pt_eigenvalue_zero_at_third():
    psi = projector(max_entangled(2))
    omega = psi / 3 + (2 / 3) * np.eye(4) / 4
    w, _ = hermitian_eig(partial_transpose(omega, DimPair(2, 2)))
    assert abs(w[0]) <= 1e-10


@given(st.integers(2, 12), seeds)
@settings(max_examples=60, deadline=None)
def test_eigensolvers_agree(n, seed):
    m = random_hermitian(n, seed)
    w, v = hermitian_eig(m)
    scale = np.max(np.abs(m))
    assert np.max(np.abs(m - v @ np.diag(w) @ v.conj().T)) <= 1e-10 * scale
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-10
    assert np.all(np.diff(w) >= 0)
    wj, vj = jacobi_eigh(m)
    assert np.max(np.abs(w - wj)) <= 1e-10 * scale
    assert np.max(np.abs(m - vj @ np.diag(wj) @ vj.conj().T)) <= 1e-10 * scale


def test_jacobi_raises_when_out_of_sweeps():
    m = random_hermitian(6, 1)
    with pytest.raises(ConvergenceError):
        jacobi_eigh(m, max_sweeps=1)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_gell_mann_orthonormal(d):
    b = gell_mann_basis(d)
    g = b.elements
    assert len(g) == d * d
    gram = np.einsum("jab,kba->jk", g, g)
    assert np.max(np.abs(gram - np.eye(d * d))) <= 1e-12
    assert np.max(np.abs(g - g.conj().transpose(0, 2, 1))) <= 1e-12
    assert np.allclose(g[0], np.eye(d) / np.sqrt(d), atol=1e-15)


def test_gell_mann_qubit_is_pauli():
    g = gell_mann_basis(2).elements * np.sqrt(2)
    pauli = [np.eye(2), SX, np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    for p in pauli:
        assert min(np.max(np.abs(p - x)) for x in g) <= 1e-12


def test_gell_mann_reconstruction_many():
    for d in (2, 3, 4):
        b = gell_mann_basis(d)
        for seed in range(100):
            x = random_hermitian(d, seed)
            assert np.max(np.abs(b.reconstruct(b.coefficients(x)) - x)) <= 1e-10
    pb = product_basis((3, 2))
    x = random_hermitian(6, 3)
    assert np.max(np.abs(pb.reconstruct(pb.coefficients(x)) - x)) <= 1e-10


def test_random_helpers():
    assert np.array_equal(random_unit_vector(5, 9), random_unit_vector(5, 9))
    assert abs(np.linalg.norm(random_unit_vector(7, 2)) - 1) <= 1e-12
    rho = random_density(4, 3)
    assert abs(np.trace(rho) - 1) <= 1e-12
    assert np.linalg.eigvalsh(rho).min() >= -1e-12
    rng = np.random.default_rng(0)
    mean = sum(random_density(2, rng) for _ in range(10_000)) / 10_000
    assert np.max(np.abs(mean - np.eye(2) / 2)) <= 0.05


def test_default_tol_env(monkeypatch):
    monkeypatch.delenv("EA_ATLAS_TOL", raising=False)
    assert default_tol() == 1e-10
    monkeypatch.setenv("EA_ATLAS_TOL", "1e-8")
    assert default_tol() == 1e-8
    monkeypatch.setenv("EA_ATLAS_TOL", "-1")
    with pytest.raises(ValueError):
        default_tol()
