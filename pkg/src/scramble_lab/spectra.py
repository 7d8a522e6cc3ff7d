"""Induced (fixed-trace Wishart) ensemble of reduced density matrices.

Sampling goes Haar state -> reshape to an ``m x n`` coefficient matrix ``C`` ->
``rho_A = C C^dag``.  Closed-form predictions assume ``m <= n``.  Entropies are in nats.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConventionError, DimensionError, DomainError
from .haar import StateVector, sample_haar_state
from .linalg import dagger
from .rng import RngSeed, map_streams

CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class BipartiteSplit:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise DimensionError("subsystem dimensions must be positive")

    @property
    def dim(self) -> int:
        return self.m * self.n

    def swapped(self) -> "BipartiteSplit":
        return BipartiteSplit(self.n, self.m)

    def canonical(self) -> "BipartiteSplit":
        """Labels ordered so that m <= n; entanglement statistics are symmetric under the swap."""
        return self if self.m <= self.n else self.swapped()

    def require_convention(self) -> None:
        if self.m > self.n:
            raise ConventionError(f"closed forms need m <= n (got m={self.m}, n={self.n}); "
                                  "use split.canonical()")


@dataclass(frozen=True)
class EntanglementSpectrum:
    """Eigenvalues of a reduced density matrix, stored in descending order."""

    lambdas: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float).reshape(-1)
        if lam.size == 0:
            raise DomainError("empty spectrum")
        if np.any(lam < -CLAMP_TOL):
            raise DomainError(f"negative eigenvalue {lam.min():.3e}")
        lam = np.sort(np.clip(lam, 0.0, None))[::-1]
        if abs(lam.sum() - 1) > 1e-10:
            raise DomainError(f"spectrum sums to {lam.sum()!r}, expected 1")
        object.__setattr__(self, "lambdas", lam)

    @property
    def ascending(self) -> np.ndarray:
        return self.lambdas[::-1]

    def __len__(self) -> int:
        return self.lambdas.size


@dataclass(frozen=True)
class MomentPredictions:
    mean_eig: float
    second_moment: float
    var_eig: float
    purity_mean: float
    page_exact: float
    page_asymptotic: float


def coefficient_matrix(psi: StateVector | np.ndarray, split: BipartiteSplit) -> np.ndarray:
    amps = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi, dtype=complex)
    if amps.size != split.dim:
        raise DimensionError(f"state dimension {amps.size} != m*n = {split.dim}")
    return amps.reshape(split.m, split.n)


def reduced_density_from_state(psi: StateVector, split: BipartiteSplit) -> np.ndarray:
    c = coefficient_matrix(psi, split)
    return c @ dagger(c)


def sample_spectrum(split: BipartiteSplit, seed: RngSeed) -> EntanglementSpectrum:
    rho = reduced_density_from_state(sample_haar_state(split.dim, seed), split)
    return EntanglementSpectrum(np.linalg.eigvalsh(rho))


def sample_spectra(split: BipartiteSplit, n_samples: int, seed: RngSeed) -> np.ndarray:
    """``(n_samples, m)`` array of descending spectra, one derived stream per sample."""
    return np.stack(map_streams(lambda s: sample_spectrum(split, s).lambdas, seed, n_samples))


def harmonic_tail(n: int, top: int) -> float:
    """sum_{k=n+1}^{top} 1/k."""
    if top <= n:
        return 0.0
    return float(np.sum(1.0 / np.arange(n + 1, top + 1, dtype=float)))


def page_entropy(m: int, n: int) -> float:
    """Exact mean subsystem entropy of a Haar state; symmetric in (m, n)."""
    m, n = min(m, n), max(m, n)
    return harmonic_tail(n, m * n) - (m - 1) / (2 * n)


def moment_predictions(split: BipartiteSplit) -> MomentPredictions:
    split.require_convention()
    m, n = split.m, split.n
    return MomentPredictions(
        mean_eig=1 / m,
        second_moment=(m + n) / (m * (m * n + 1)),
        var_eig=(m * m - 1) / (m * m * (m * n + 1)),
        purity_mean=(m + n) / (m * n + 1),
        page_exact=page_entropy(m, n),
        page_asymptotic=float(np.log(m) - m / (2 * n)),
    )


def _lambdas(spectrum) -> np.ndarray:
    if isinstance(spectrum, EntanglementSpectrum):
        return spectrum.lambdas
    return np.asarray(spectrum, dtype=float)


def purity(spectrum) -> float:
    lam = _lambdas(spectrum)
    return float(np.sum(lam**2, axis=-1)) if lam.ndim == 1 else np.sum(lam**2, axis=-1)


def von_neumann_entropy(spectrum):
    """-sum lambda log lambda (nats), with 0 log 0 = 0.  Accepts a batch along the last axis."""
    lam = np.clip(_lambdas(spectrum), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0, -lam * np.log(lam), 0.0)
    s = terms.sum(axis=-1)
    return float(s) if np.ndim(s) == 0 else s


def mp_edges(split: BipartiteSplit) -> tuple[float, float]:
    split.require_convention()
    r = np.sqrt(split.m / split.n)
    return (1 - r) ** 2 / split.m, (1 + r) ** 2 / split.m


def mp_pdf(lam, split: BipartiteSplit):
    """Marchenko-Pastur density for eigenvalues of rho_A (unit-trace scaling).

    The prefactor is n/(2 pi), which makes the density integrate to one.
    """
    lo, hi = mp_edges(split)
    x = np.asarray(lam, dtype=float)
    inside = (x > lo) & (x < hi)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = split.n / (2 * np.pi) * np.sqrt(np.clip((hi - x) * (x - lo), 0, None)) / x
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def mp_bin_masses(edges: np.ndarray, split: BipartiteSplit) -> np.ndarray:
    """MP probability mass of each histogram bin, by adaptive quadrature."""
    lo, hi = mp_edges(split)
    masses = []
    for a, b in zip(edges[:-1], edges[1:]):
        a, b = max(a, lo), min(b, hi)
        masses.append(integrate.quad(mp_pdf, a, b, args=(split,), limit=200)[0] if b > a else 0.0)
    return np.array(masses)


def mp_l1_distance(eigenvalues, split: BipartiteSplit, bins: int = 24) -> float:
    """L1 distance between the eigenvalue histogram and the MP law, binned on the MP support."""
    lo, hi = mp_edges(split)
    eig = np.asarray(eigenvalues, dtype=float).ravel()
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(eig, bins=edges)
    outside = eig.size - counts.sum()
    emp = counts / eig.size
    return float(np.abs(emp - mp_bin_masses(edges, split)).sum() + outside / eig.size)


def log_joint_density(spectrum, split: BipartiteSplit) -> float:
    """Unnormalized log-density of the fixed-trace Wishart eigenvalue law.

    ``(n - m) sum log lambda_i + 2 sum_{i<j} log|lambda_i - lambda_j|``.  Returns
    ``-inf`` when an eigenvalue vanishes or two coincide (within 1e-12 relative);
    check with ``np.isneginf``.
    """
    lam = np.sort(_lambdas(spectrum))
    if lam.size != split.m:
        raise DimensionError(f"spectrum has {lam.size} values, split has m = {split.m}")
    scale = max(float(np.max(np.abs(lam))), 1e-300)
    if np.any(lam <= 0) or np.any(np.diff(lam) <= 1e-12 * scale):
        return float("-inf")
    i, j = np.triu_indices(lam.size, k=1)
    vandermonde = 2 * np.sum(np.log(np.abs(lam[i] - lam[j])))
    return float((split.n - split.m) * np.sum(np.log(lam)) + vandermonde)
