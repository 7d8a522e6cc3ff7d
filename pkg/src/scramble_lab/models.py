"""Hamiltonian model zoo: GUE, mixed-field Ising chain, complex SYK_4."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import DomainError
from .haar import sample_ginibre
from .linalg import HermitianEigen, hermitian_eigen, is_hermitian
from .rng import RngSeed

FAMILIES = ("GUE", "MixedFieldIsing", "SYK4", "Custom")

# Default couplings for the nonintegrable Ising chain.
ISING_DEFAULTS = {"J": 1.0, "hx": 0.905, "hz": 0.809}


@dataclass(frozen=True, eq=False)
class HamiltonianModel:
    matrix: np.ndarray
    family: str = "Custom"
    params: dict = field(default_factory=dict)
    seed: RngSeed | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown model family {self.family!r}")
        if not is_hermitian(self.matrix, 1e-10 * max(1.0, np.linalg.norm(self.matrix))):
            raise DomainError("Hamiltonian matrix is not Hermitian")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int | None:
        n = int(round(np.log2(self.dim)))
        return n if 2**n == self.dim else None

    @cached_property
    def eigen(self) -> HermitianEigen:
        return hermitian_eigen(self.matrix)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eigen.eigenvalues


def build_gue(dim: int, seed: RngSeed) -> HamiltonianModel:
    """GUE matrix scaled so that E[Tr H^2]/D = 1 (semicircle on [-2, 2])."""
    if dim < 2:
        raise DomainError("GUE needs D >= 2")
    g = sample_ginibre(dim, dim, seed)
    h = (g + g.conj().T) / 2 * np.sqrt(2.0 / dim)
    return HamiltonianModel(h, "GUE", {"D": dim}, seed)


def _site_diag_z(n_sites: int) -> np.ndarray:
    """Row i holds the Z eigenvalue (+1 for bit 0) of site i on every basis state; site 0 is the slowest bit."""
    states = np.arange(2**n_sites)
    bits = (states[None, :] >> (n_sites - 1 - np.arange(n_sites))[:, None]) & 1
    return 1.0 - 2.0 * bits


def build_mixed_field_ising(L: int, J: float = ISING_DEFAULTS["J"], hx: float = ISING_DEFAULTS["hx"],
                            hz: float = ISING_DEFAULTS["hz"]) -> HamiltonianModel:
    """H = sum_i J Z_i Z_{i+1} + hx X_i + hz Z_i with open boundaries."""
    if not 2 <= L <= 12:
        raise DomainError(f"chain length L={L} outside [2, 12]")
    dim = 2**L
    z = _site_diag_z(L)
    diag = J * np.sum(z[:-1] * z[1:], axis=0) + hz * np.sum(z, axis=0)
    h = np.diag(diag).astype(complex)
    if hx:
        states = np.arange(dim)
        for i in range(L):
            h[states ^ (1 << (L - 1 - i)), states] += hx
    return HamiltonianModel(h, "MixedFieldIsing", {"L": L, "J": J, "hx": hx, "hz": hz})


def reflection_permutation(L: int) -> np.ndarray:
    """Basis permutation implementing the site reversal i -> L-1-i."""
    states = np.arange(2**L)
    out = np.zeros_like(states)
    for i in range(L):
        out |= ((states >> i) & 1) << (L - 1 - i)
    return out


def reflection_sectors(model: HamiltonianModel) -> list[np.ndarray]:
    """Spectra of the even and odd reflection sectors of a uniform open chain."""
    L = model.n_qubits
    perm = reflection_permutation(L)
    dim = model.dim
    even, odd = [], []
    for s in range(dim):
        r = perm[s]
        if r < s:
            continue
        v = np.zeros(dim)
        if r == s:
            v[s] = 1
            even.append(v)
        else:
            v[s] = v[r] = 1 / np.sqrt(2)
            even.append(v)
            w = np.zeros(dim)
            w[s], w[r] = 1 / np.sqrt(2), -1 / np.sqrt(2)
            odd.append(w)
    out = []
    for basis in (even, odd):
        b = np.array(basis).T
        out.append(np.linalg.eigvalsh(b.T @ model.matrix @ b))
    return out


def jordan_wigner_annihilators(n_modes: int) -> list[sp.csr_matrix]:
    """c_i = Z (x) ... (x) Z (x) |0><1| (x) I ...; occupation |1> is filled."""
    lower = sp.csr_matrix(np.array([[0, 1], [0, 0]], dtype=complex))
    z = sp.csr_matrix(np.diag([1, -1]).astype(complex))
    eye = sp.identity(2, dtype=complex, format="csr")
    ops = []
    for i in range(n_modes):
        factors = [z] * i + [lower] + [eye] * (n_modes - i - 1)
        op = factors[0]
        for f in factors[1:]:
            op = sp.kron(op, f, format="csr")
        ops.append(op)
    return ops


def number_operator(n_modes: int) -> np.ndarray:
    return np.diag(np.sum(1 - _site_diag_z(n_modes), axis=0) / 2).astype(complex)


def build_syk4(N: int, J: float = 1.0, seed: RngSeed | None = None) -> HamiltonianModel:
    """Complex SYK_4: H = sum_{ijkl} J_{ij;kl} c_i^dag c_j^dag c_k c_l.

    Independent couplings live on ordered pairs A=(i<j), B=(k<l) with A <= B;
    J is antisymmetric within each pair and J_{B;A} = conj(J_{A;B}), so H is Hermitian.
    Each independent coupling has E|J|^2 = J^2/N^3 (real on the diagonal A = B).
    """
    if not 4 <= N <= 10:
        raise DomainError(f"SYK size N={N} outside [4, 10]")
    seed = RngSeed.coerce(seed)
    rng = seed.generator()
    c = jordan_wigner_annihilators(N)
    cd = [op.conj().T.tocsr() for op in c]
    pairs = list(itertools.combinations(range(N), 2))
    create = {p: cd[p[0]] @ cd[p[1]] for p in pairs}
    annihilate = {p: c[p[0]] @ c[p[1]] for p in pairs}
    sigma = J / N**1.5
    h = sp.csr_matrix((2**N, 2**N), dtype=complex)
    for a_idx, a in enumerate(pairs):
        for b in pairs[a_idx:]:
            if a == b:
                coupling = sigma * rng.standard_normal()
            else:
                coupling = sigma * (rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2)
            # the factor 4 collects the antisymmetric orderings of (i,j) and (k,l)
            term = 4 * coupling * (create[a] @ annihilate[b])
            h = h + term
            if a != b:
                h = h + term.conj().T
    return HamiltonianModel(h.toarray(), "SYK4", {"N": N, "J": J}, seed)


def syk_mean_square_norm(N: int, J: float = 1.0) -> float:
    """E[Tr H^2]/2^N for build_syk4, by counting the weight 2^-|A u B| of each pair term."""
    total = 0.0
    for a, b in itertools.product(itertools.combinations(range(N), 2), repeat=2):
        total += 2.0 ** -len(set(a) | set(b))
    return 16 * J**2 / N**3 * total
