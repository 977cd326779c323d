"""Dense complex linear algebra for bipartite operators.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Subsystem ``A``
is always the slow (left) tensor factor, so ``kron(a, b)`` acts as ``a`` on
``A`` and ``b`` on ``B``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

STRUCTURAL_TOL = 1e-12
SPECTRAL_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """An iterative eigensolver failed to converge."""


def default_tol() -> float:
    """Numerical tolerance for positivity decisions (``EA_ATLAS_TOL`` overrides)."""
    value = os.environ.get("EA_ATLAS_TOL")
    if value is None:
        return SPECTRAL_TOL
    tol = float(value)
    if not tol > 0:
        raise ValueError(f"EA_ATLAS_TOL must be positive, got {value!r}")
    return tol


@dataclass(frozen=True)
class DimPair:
    """Subsystem dimensions of a bipartite space ``A (x) B``."""

    dA: int
    dB: int

    def __post_init__(self):
        for name in ("dA", "dB"):
            value = getattr(self, name)
            if int(value) != value or value < 2:
                raise ValueError(f"{name} must be an integer >= 2, got {value!r}")

    @property
    def total(self) -> int:
        return self.dA * self.dB

    def as_tuple(self) -> tuple[int, int]:
        return (self.dA, self.dB)

    @classmethod
    def parse(cls, text: str) -> "DimPair":
        """Parse ``"3x2"`` style strings."""
        parts = text.lower().replace("*", "x").split("x")
        if len(parts) != 2:
            raise ValueError(f"expected dims like '3x2', got {text!r}")
        return cls(int(parts[0]), int(parts[1]))

    def __str__(self):
        return f"{self.dA}x{self.dB}"


def as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def ket(v) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(-1)


def projector(v) -> np.ndarray:
    v = ket(v)
    return np.outer(v, v.conj())


def max_entangled(d: int) -> np.ndarray:
    """``|Psi+> = d^{-1/2} sum_i |i>|i>``."""
    return np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)


def is_hermitian(m, tol: float = STRUCTURAL_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def _selector(which) -> int:
    if which in ("A", "a", 0):
        return 0
    if which in ("B", "b", 1):
        return 1
    raise ValueError(f"subsystem selector must be 'A' or 'B', got {which!r}")


def _check_dims(m: np.ndarray, dims: DimPair):
    if m.shape != (dims.total, dims.total):
        raise ValueError(
            f"matrix of shape {m.shape} does not factor as {dims.dA}x{dims.dB}"
        )


def partial_trace(m, dims: DimPair, keep="A") -> np.ndarray:
    """Trace out one factor of a bipartite operator, keeping ``keep``."""
    m = as_matrix(m)
    _check_dims(m, dims)
    t = m.reshape(dims.dA, dims.dB, dims.dA, dims.dB)
    if _selector(keep) == 0:
        return np.einsum("ajbj->ab", t)
    return np.einsum("iaib->ab", t)


def partial_transpose(m, dims: DimPair, which="B") -> np.ndarray:
    m = as_matrix(m)
    _check_dims(m, dims)
    t = m.reshape(dims.dA, dims.dB, dims.dA, dims.dB)
    if _selector(which) == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(dims.total, dims.total)


def ptrace_multi(m, dims, keep) -> np.ndarray:
    """Partial trace over a multipartite tensor; ``keep`` lists surviving factors."""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    keep = sorted(keep)
    t = np.asarray(m).reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    for offset, k in enumerate(traced):
        axis = k - offset
        t = np.trace(t, axis1=axis, axis2=axis + t.ndim // 2)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)


def permute_subsystems(m, dims, order) -> np.ndarray:
    """Reorder tensor factors: result factor ``j`` is input factor ``order[j]``."""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    t = np.asarray(m).reshape(dims + dims)
    t = t.transpose(list(order) + [n + k for k in order])
    total = int(np.prod(dims))
    return t.reshape(total, total)


def hermitian_eig(m, tol: float = SPECTRAL_TOL):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.

    The input is symmetrized before solving; deviations from Hermiticity larger
    than ``tol`` (relative to the largest entry, floor 1) raise ``ValueError``.
    """
    m = as_matrix(m)
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if not is_hermitian(m, tol * scale):
        raise ValueError("matrix is not Hermitian within tolerance")
    h = 0.5 * (m + m.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return w, v


def min_eig(m) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a unit eigenvector of a Hermitian matrix."""
    w, v = hermitian_eig(m)
    return float(w[0]), v[:, 0]


def jacobi_eigh(m, tol: float = 1e-14, max_sweeps: int = 100):
    """Cyclic complex Jacobi eigensolver (slow, self-contained reference).

    Each rotation first removes the phase of the pivot ``m[p, q]`` and then
    applies a real Givens rotation, so the accumulated transform stays unitary.
    """
    a = as_matrix(m).copy()
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.max(np.abs(a), initial=0.0), 1e-300)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag <= 1e-300:
                    continue
                phase = b / mag
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ u
    else:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).real
    order = np.argsort(w)
    return w[order], v[:, order]


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """Orthonormal Hermitian operator basis, ``elements[0]`` proportional to identity."""

    dim: int
    elements: np.ndarray

    def coefficients(self, x) -> np.ndarray:
        """``tr(gamma_j x)`` for every element."""
        return np.einsum("jab,ba->j", self.elements, np.asarray(x, dtype=complex))

    def reconstruct(self, coeffs) -> np.ndarray:
        return np.einsum("j,jab->ab", np.asarray(coeffs), self.elements)


@lru_cache(maxsize=None)
def _gell_mann_elements(d: int) -> np.ndarray:
    mats = [np.eye(d, dtype=complex) / np.sqrt(d)]
    inv = 1.0 / np.sqrt(2.0)
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = inv
            mats.append(sym)
            asym = np.zeros((d, d), dtype=complex)
            asym[j, k], asym[k, j] = -1j * inv, 1j * inv
            mats.append(asym)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(complex))
    out = np.array(mats)
    out.setflags(write=False)
    return out


def gell_mann_basis(d: int) -> OperatorBasis:
    """Normalized generalized Gell-Mann matrices with ``gamma_0 = I / sqrt(d)``."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    return OperatorBasis(d, _gell_mann_elements(int(d)))


@lru_cache(maxsize=None)
def _product_elements(dims: tuple[int, ...]) -> np.ndarray:
    elems = np.ones((1, 1, 1), dtype=complex)
    for d in dims:
        g = _gell_mann_elements(d)
        elems = np.einsum("jab,kcd->jkacbd", elems, g).reshape(
            elems.shape[0] * g.shape[0], elems.shape[1] * d, elems.shape[2] * d
        )
    elems.setflags(write=False)
    return elems


def product_basis(dims) -> OperatorBasis:
    """Tensor products of per-factor Gell-Mann bases, first factor slowest."""
    dims = tuple(int(d) for d in dims)
    return OperatorBasis(int(np.prod(dims)), _product_elements(dims))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unit_vector(d: int, seed=None) -> np.ndarray:
    """Haar-random unit vector in ``C^d``."""
    rng = _rng(seed)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_density(d: int, seed=None, rank: int | None = None) -> np.ndarray:
    """Hilbert-Schmidt random density matrix (Ginibre ``G G^dagger`` normalized)."""
    rng = _rng(seed)
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(d: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (g + g.conj().T)
