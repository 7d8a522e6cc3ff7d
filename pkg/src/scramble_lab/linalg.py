"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` complex arrays.  Bipartite layouts put subsystem A
on the slow (leading) tensor index, consistent with :func:`tensor_product`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionError, SymmetryError

TOL = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def _require_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")


def frobenius(a) -> float:
    return float(np.linalg.norm(a, "fro"))


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def is_unitary(a, tol: float = TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return frobenius(dagger(a) @ a - np.eye(a.shape[0])) < tol


def is_hermitian(a, tol: float = TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return frobenius(a - dagger(a)) < tol


def is_density(a, tol: float = TOL) -> bool:
    """Hermitian, positive semidefinite and unit trace, all within ``tol``."""
    if not is_hermitian(a, tol):
        return False
    a = np.asarray(a)
    if abs(np.trace(a) - 1) > tol:
        return False
    return bool(np.linalg.eigvalsh((a + dagger(a)) / 2)[0] >= -tol)


def qr_decompose(a) -> tuple[np.ndarray, np.ndarray]:
    """QR decomposition of a square complex matrix (Householder, via LAPACK)."""
    a = as_matrix(a)
    _require_square(a)
    return np.linalg.qr(a)


@dataclass(frozen=True)
class HermitianEigen:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def _require_hermitian(h: np.ndarray, tol: float) -> None:
    _require_square(h)
    err = frobenius(h - dagger(h))
    if err > tol * max(1.0, frobenius(h)):
        raise SymmetryError(f"matrix is not Hermitian (||H - H^dag||_F = {err:.3e})")


def hermitian_eigen(h, tol: float = TOL) -> HermitianEigen:
    h = as_matrix(h)
    _require_hermitian(h, tol)
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return HermitianEigen(w, v)


def evolve_unitary(h, t: float, eig: HermitianEigen | None = None) -> np.ndarray:
    """``exp(-i H t)`` built from the spectral decomposition of ``H``.

    Pass a precomputed ``eig`` to reuse one diagonalization across many times.
    """
    if eig is None:
        eig = hermitian_eigen(h)
    v = eig.eigenvectors
    return (v * np.exp(-1j * eig.eigenvalues * t)) @ dagger(v)


def tensor_product(*factors) -> np.ndarray:
    """Kronecker product; the first factor is the slow index."""
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, as_matrix(f))
    return out


def kron_power(a, t: int) -> np.ndarray:
    return tensor_product(*([a] * t)) if t > 0 else np.ones((1, 1), dtype=complex)


def partial_trace(rho, m: int, n: int, keep: Literal["A", "B"] = "A") -> np.ndarray:
    """Trace out one factor of an ``(m n) x (m n)`` operator on A (x) B."""
    rho = as_matrix(rho)
    if rho.shape != (m * n, m * n):
        raise DimensionError(f"operator of shape {rho.shape} does not match m*n = {m * n}")
    r = rho.reshape(m, n, m, n)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise ValueError("keep must be 'A' or 'B'")


def embed_site(op, site: int, n_sites: int, local_dim: int = 2) -> np.ndarray:
    """Place a single-site operator at ``site`` of an ``n_sites`` chain (site 0 slowest)."""
    left = np.eye(local_dim ** site)
    right = np.eye(local_dim ** (n_sites - site - 1))
    return tensor_product(left, op, right)


def operator_norm(a) -> float:
    """Largest singular value."""
    a = np.asarray(a)
    return float(np.sqrt(max(np.linalg.eigvalsh(dagger(a) @ a)[-1], 0.0)))
