"""Haar-random unitaries and states, overlap statistics, concentration of measure."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, SymmetryError
from .linalg import is_hermitian, qr_decompose, tensor_product
from .rng import RngSeed, map_streams


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > 1e-12:
            raise DomainError(f"state is not normalized (norm = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def normalized(cls, vector) -> "StateVector":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        return cls(v / np.linalg.norm(v))

    @classmethod
    def basis(cls, dim: int, index: int = 0) -> "StateVector":
        v = np.zeros(dim, dtype=complex)
        v[index] = 1
        return cls(v)

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def sample_ginibre(rows: int, cols: int, seed: RngSeed) -> np.ndarray:
    """I.i.d. complex Gaussian entries with E|G_ij|^2 = 1."""
    return _ginibre(seed.generator(), (rows, cols))


def haar_from_ginibre(g: np.ndarray) -> np.ndarray:
    """Map a square Ginibre matrix to a Haar unitary: Q with columns rephased by R_jj/|R_jj|."""
    q, r = qr_decompose(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def sample_haar_unitary(dim: int, seed: RngSeed) -> np.ndarray:
    return haar_from_ginibre(sample_ginibre(dim, dim, seed))


def sample_haar_state(dim: int, seed: RngSeed) -> StateVector:
    # A normalized Gaussian vector is distributed as any column of a Haar unitary.
    v = _ginibre(seed.generator(), dim)
    return StateVector(v / np.linalg.norm(v))


def sample_haar_states(dim: int, n_samples: int, seed: RngSeed) -> np.ndarray:
    """``(n_samples, dim)`` array of Haar states; row ``i`` equals ``sample_haar_state(dim, seed.child(i))``."""
    rows = map_streams(lambda s: sample_haar_state(dim, s).amplitudes, seed, n_samples)
    return np.stack(rows) if rows else np.empty((0, dim), dtype=complex)


def overlap_squared(psi: StateVector, phi: StateVector) -> float:
    if psi.dim != phi.dim:
        raise DimensionError(f"dimension mismatch: {psi.dim} vs {phi.dim}")
    return float(min(abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2, 1.0))


def overlap_pdf(chi, dim: int):
    """Density of |<psi|phi>|^2 for independent Haar states: (D-1)(1-chi)^(D-2)."""
    if dim < 2:
        raise DomainError("overlap density needs D >= 2")
    chi_arr = np.asarray(chi, dtype=float)
    if np.any((chi_arr < 0) | (chi_arr > 1)):
        raise DomainError("chi must lie in [0, 1]")
    out = (dim - 1) * (1 - chi_arr) ** (dim - 2)
    return float(out) if out.ndim == 0 else out


def overlap_moments(dim: int) -> tuple[float, float]:
    """Mean and variance of the Beta(1, D-1) overlap law."""
    return 1 / dim, (dim - 1) / (dim**2 * (dim + 1))


def overlap_samples(dim: int, n_samples: int, seed: RngSeed) -> np.ndarray:
    """Overlaps of ``n_samples`` independent Haar pairs."""
    def one(s: RngSeed) -> float:
        return overlap_squared(sample_haar_state(dim, s.child(0)), sample_haar_state(dim, s.child(1)))
    return np.array(map_streams(one, seed, n_samples))


@dataclass(frozen=True)
class ConcentrationRecord:
    mean: float
    variance: float
    max_deviation: float
    predicted_mean: float
    n_samples: int

    @property
    def standard_error(self) -> float:
        return float(np.sqrt(self.variance / self.n_samples))


def concentration_experiment(dim: int, observable, n_samples: int,
                             seed: RngSeed) -> ConcentrationRecord:
    """Statistics of <psi| O_A (x) I |psi> over Haar-random ``psi``.

    The predicted mean is ``Tr(O_A)/m``, the expectation in the maximally mixed state.
    """
    o = np.asarray(observable, dtype=complex)
    m = o.shape[0]
    if o.shape != (m, m) or dim % m:
        raise DimensionError(f"observable of size {m} does not divide D = {dim}")
    if not is_hermitian(o):
        raise SymmetryError("observable must be Hermitian")
    n = dim // m
    states = sample_haar_states(dim, n_samples, seed).reshape(n_samples, m, n)
    # <psi|O (x) I|psi> = sum_{ijk} conj(C_ik) O_ij C_jk
    values = np.einsum("sik,ij,sjk->s", states.conj(), o, states).real
    predicted = float(np.trace(o).real / m)
    return ConcentrationRecord(
        mean=float(values.mean()),
        variance=float(values.var(ddof=1)) if n_samples > 1 else 0.0,
        max_deviation=float(np.max(np.abs(values - predicted))),
        predicted_mean=predicted,
        n_samples=n_samples,
    )


def local_observable(op, dim: int):
    """``op (x) I`` padded to total dimension ``dim``."""
    op = np.asarray(op, dtype=complex)
    return tensor_product(op, np.eye(dim // op.shape[0]))
