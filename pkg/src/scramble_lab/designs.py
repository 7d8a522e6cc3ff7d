"""Unitary ensembles, t-fold twirls, t-design tests and brick-wall random circuits."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetError, DimensionError, DomainError
from .haar import haar_from_ginibre, sample_ginibre, sample_haar_unitary
from .linalg import PAULIS, dagger, is_unitary, tensor_product
from .rng import RngSeed, map_streams

TWIRL_QUBIT_BUDGET = 12

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PHASE_S = np.diag([1, 1j]).astype(complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


@dataclass(frozen=True, eq=False)
class UnitaryEnsemble:
    """Either an explicit weighted set of unitaries or a seeded sampler."""

    dim: int
    members: np.ndarray | None = None
    weights: np.ndarray | None = None
    sampler: Callable[[RngSeed], np.ndarray] | None = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        if (self.members is None) == (self.sampler is None):
            raise DomainError("give exactly one of members or sampler")
        if self.members is not None:
            members = np.asarray(self.members, dtype=complex)
            if members.ndim != 3 or members.shape[1:] != (self.dim, self.dim):
                raise DimensionError(f"members must have shape (K, {self.dim}, {self.dim})")
            weights = (np.full(len(members), 1 / len(members)) if self.weights is None
                       else np.asarray(self.weights, dtype=float))
            if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
                raise DomainError("weights must be nonnegative and sum to 1")
            if not all(is_unitary(u) for u in members):
                raise DomainError("ensemble member is not unitary")
            object.__setattr__(self, "members", members)
            object.__setattr__(self, "weights", weights)

    @property
    def is_explicit(self) -> bool:
        return self.members is not None

    def __len__(self) -> int:
        if not self.is_explicit:
            raise TypeError("sampler ensembles have no length")
        return len(self.members)

    def draw(self, n_samples: int, seed: RngSeed) -> np.ndarray:
        """``(n, D, D)`` stack of draws; explicit ensembles are sampled by weight."""
        if self.is_explicit:
            idx = seed.generator().choice(len(self.members), size=n_samples, p=self.weights)
            return self.members[idx]
        return np.stack(map_streams(self.sampler, seed, n_samples))

    @classmethod
    def explicit(cls, members: Sequence[np.ndarray], weights=None, name: str = "") -> "UnitaryEnsemble":
        members = np.asarray(members, dtype=complex)
        return cls(members.shape[1], members=members, weights=weights, name=name)

    @classmethod
    def haar(cls, dim: int) -> "UnitaryEnsemble":
        return cls(dim, sampler=lambda s: sample_haar_unitary(dim, s), name=f"Haar(U({dim}))")


def sample_haar_unitaries(dim: int, n_samples: int, seed: RngSeed) -> np.ndarray:
    """Stack of Haar unitaries; entry ``i`` equals ``sample_haar_unitary(dim, seed.child(i))``."""
    g = np.stack(map_streams(lambda s: sample_ginibre(dim, dim, s), seed, n_samples))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[:, None, :]


def batch_kron_power(us: np.ndarray, t: int) -> np.ndarray:
    """``U^{(x) t}`` for every matrix in a stack."""
    out = us
    for _ in range(t - 1):
        k, a, _ = out.shape
        d = us.shape[1]
        out = np.einsum("kij,klm->kiljm", out, us).reshape(k, a * d, a * d)
    return out


def _conjugate_mean(ut: np.ndarray, x: np.ndarray, weights: np.ndarray | None = None):
    vals = ut @ x @ dagger(ut)
    if weights is None:
        return vals.mean(axis=0), vals
    return np.einsum("k,kij->ij", weights, vals), vals


def _check_twirl_dims(x: np.ndarray, dim: int, t: int) -> None:
    if x.shape != (dim**t, dim**t):
        raise DimensionError(f"operator of shape {x.shape} does not act on (D={dim})^{t}")


def twirl(ensemble: UnitaryEnsemble, x, t: int, n_samples: int = 10_000,
          seed: RngSeed | None = None) -> np.ndarray:
    """E_U[U^{(x)t} X U^{dag (x)t}]: exact for explicit ensembles, Monte Carlo otherwise."""
    x = np.asarray(x, dtype=complex)
    _check_twirl_dims(x, ensemble.dim, t)
    if ensemble.is_explicit:
        return _conjugate_mean(batch_kron_power(ensemble.members, t), x, ensemble.weights)[0]
    us = ensemble.draw(n_samples, RngSeed.coerce(seed))
    return _conjugate_mean(batch_kron_power(us, t), x)[0]


def _require_budget(dim: int, t: int) -> None:
    if t * np.log2(dim) > TWIRL_QUBIT_BUDGET + 1e-9:
        raise BudgetError(f"t log2 D = {t * np.log2(dim):.1f} exceeds {TWIRL_QUBIT_BUDGET}")


def haar_twirl_oracle(x, t: int, dim: int, n_samples: int,
                      seed: RngSeed) -> tuple[np.ndarray, np.ndarray]:
    """Monte-Carlo Haar t-fold twirl and its per-entry standard error."""
    _require_budget(dim, t)
    x = np.asarray(x, dtype=complex)
    _check_twirl_dims(x, dim, t)
    ut = batch_kron_power(sample_haar_unitaries(dim, n_samples, seed), t)
    mean, vals = _conjugate_mean(ut, x)
    se = np.sqrt((vals.real.var(axis=0, ddof=1) + vals.imag.var(axis=0, ddof=1)) / n_samples)
    return mean, se


def haar_twirl_t1(x) -> np.ndarray:
    """Exact Haar 1-fold twirl: Tr(X) I/D."""
    x = np.asarray(x, dtype=complex)
    return np.trace(x) * np.eye(x.shape[0]) / x.shape[0]


def pauli_strings(n_qubits: int) -> list[np.ndarray]:
    return [tensor_product(*ps) for ps in itertools.product(PAULIS, repeat=n_qubits)]


@dataclass(frozen=True)
class DesignReport:
    t: int
    max_deviation: float
    mc_error: float
    tolerance: float
    passed: bool

    @property
    def pass_(self) -> bool:
        return self.passed


def design_test(ensemble: UnitaryEnsemble, t: int, basis: Sequence[np.ndarray] | None = None,
                n_samples: int = 20_000, tolerance: float = 1e-8,
                seed: RngSeed | None = None, exact_t1: bool = True) -> DesignReport:
    """Compare the ensemble's t-fold twirl with the Haar twirl on an operator basis.

    The Haar side is the exact projector for t = 1 (unless ``exact_t1`` is False) and
    the Monte-Carlo oracle otherwise.  ``mc_error`` is the largest Frobenius norm of the
    oracle's standard-error matrix over the basis; the test passes when the largest
    Frobenius deviation is at most ``max(tolerance, 5 mc_error)``.
    """
    seed = RngSeed.coerce(seed)
    dim = ensemble.dim
    if basis is None:
        n_q = int(round(np.log2(dim))) * t
        if 2 ** int(round(np.log2(dim))) != dim:
            raise DimensionError("default Pauli basis needs D = 2^k")
        basis = pauli_strings(n_q)
    exact = t == 1 and exact_t1
    if exact:
        haar_ut = None
    else:
        _require_budget(dim, t)
        haar_ut = batch_kron_power(sample_haar_unitaries(dim, n_samples, seed.child(0)), t)
    ens_ut = (batch_kron_power(ensemble.members, t) if ensemble.is_explicit
              else batch_kron_power(ensemble.draw(n_samples, seed.child(1)), t))
    weights = ensemble.weights if ensemble.is_explicit else None
    max_dev = mc_err = 0.0
    for x in basis:
        x = np.asarray(x, dtype=complex)
        _check_twirl_dims(x, dim, t)
        ours = _conjugate_mean(ens_ut, x, weights)[0]
        if exact:
            ref, err = haar_twirl_t1(x), 0.0
        else:
            ref, vals = _conjugate_mean(haar_ut, x)
            se = np.sqrt((vals.real.var(axis=0, ddof=1) + vals.imag.var(axis=0, ddof=1)) / n_samples)
            err = float(np.linalg.norm(se))
        max_dev = max(max_dev, float(np.linalg.norm(ours - ref)))
        mc_err = max(mc_err, err)
    return DesignReport(t, max_dev, mc_err, tolerance, max_dev <= max(tolerance, 5 * mc_err))


# -- brick-wall circuits ------------------------------------------------------

def brick_wall_gates(n_qubits: int, depth: int, seed: RngSeed) -> list[tuple[int, np.ndarray]]:
    """Gate list ``(first_qubit, 4x4 Haar gate)`` in application order.

    Layer 1, 3, ... acts on pairs (0,1), (2,3), ...; layers 2, 4, ... on (1,2), (3,4), ...
    Open boundary: a qubit left without a partner is idle in that layer.
    """
    if not 2 <= n_qubits <= 10:
        raise BudgetError(f"n_qubits={n_qubits} outside [2, 10]")
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    gates = []
    for layer in range(depth):
        layer_seed = seed.child(layer)
        for k, q in enumerate(range(layer % 2, n_qubits - 1, 2)):
            gates.append((q, haar_from_ginibre(sample_ginibre(4, 4, layer_seed.child(k)))))
    return gates


def apply_two_qubit_gate(psi: np.ndarray, gate: np.ndarray, q: int, n_qubits: int) -> np.ndarray:
    """Apply ``gate`` on qubits (q, q+1) to a state vector or to the columns of a matrix."""
    rest = psi.shape[1:]
    t = psi.reshape((2,) * n_qubits + rest)
    t = np.tensordot(gate.reshape(2, 2, 2, 2), t, axes=([2, 3], [q, q + 1]))
    t = np.moveaxis(t, [0, 1], [q, q + 1])
    return t.reshape(psi.shape)


def apply_gates(psi: np.ndarray, gates, n_qubits: int) -> np.ndarray:
    out = np.asarray(psi, dtype=complex)
    for q, g in gates:
        out = apply_two_qubit_gate(out, g, q, n_qubits)
    return out


def brick_wall_circuit(n_qubits: int, depth: int, seed: RngSeed) -> np.ndarray:
    """Full ``2^n x 2^n`` unitary of a brick-wall circuit (identity at depth 0)."""
    gates = brick_wall_gates(n_qubits, depth, seed)
    return apply_gates(np.eye(2**n_qubits, dtype=complex), gates, n_qubits)


def brick_wall_state(n_qubits: int, depth: int, seed: RngSeed) -> np.ndarray:
    """Circuit output on |0...0>, without forming the full unitary."""
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[0] = 1
    return apply_gates(psi, brick_wall_gates(n_qubits, depth, seed), n_qubits)


def brick_wall_ensemble(n_qubits: int, depth: int) -> UnitaryEnsemble:
    return UnitaryEnsemble(2**n_qubits, sampler=lambda s: brick_wall_circuit(n_qubits, depth, s),
                           name=f"brick-wall(n={n_qubits}, depth={depth})")


# -- Clifford and Pauli groups --------------------------------------------------

def phase_key(u: np.ndarray, decimals: int = 8) -> bytes:
    """Hashable key identifying ``u`` up to a global phase."""
    flat = u.ravel()
    pivot = flat[np.argmax(np.abs(flat) > 1e-9)]
    v = np.round(flat * (abs(pivot) / pivot), decimals) + (0.0 + 0.0j)
    return v.tobytes()


def _closure(generators: Sequence[np.ndarray]) -> list[np.ndarray]:
    dim = generators[0].shape[0]
    start = np.eye(dim, dtype=complex)
    seen = {phase_key(start): start}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for g in generators:
                w = g @ u
                key = phase_key(w)
                if key not in seen:
                    seen[key] = w
                    nxt.append(w)
        frontier = nxt
    return list(seen.values())


@functools.lru_cache(maxsize=None)
def _clifford_members(n_qubits: int) -> np.ndarray:
    if n_qubits == 1:
        gens = [HADAMARD, PHASE_S]
    else:
        eye = np.eye(2)
        gens = [np.kron(HADAMARD, eye), np.kron(eye, HADAMARD),
                np.kron(PHASE_S, eye), np.kron(eye, PHASE_S), CNOT]
    members = np.array(_closure(gens))
    members.setflags(write=False)
    return members


def clifford_group(n_qubits: int) -> UnitaryEnsemble:
    """Uniform ensemble over the n-qubit Clifford group modulo phases (24 or 11520 elements)."""
    if n_qubits not in (1, 2):
        raise DomainError("Clifford enumeration supports 1 or 2 qubits only")
    return UnitaryEnsemble.explicit(_clifford_members(n_qubits), name=f"Clifford({n_qubits})")


def pauli_group(n_qubits: int = 1) -> UnitaryEnsemble:
    return UnitaryEnsemble.explicit(pauli_strings(n_qubits), name=f"Pauli({n_qubits})")
