"""Simulated device benchmarking: noise channels, channel twirls, randomized
benchmarking (RB) and cross-entropy benchmarking (XEB)."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import optimize, stats

from .designs import (
    UnitaryEnsemble,
    brick_wall_gates,
    apply_two_qubit_gate,
    clifford_group,
    pauli_strings,
    phase_key,
)
from .errors import BudgetError, DimensionError, DomainError, FitError
from .haar import sample_haar_unitary
from .linalg import dagger
from .rng import RngSeed


# -- channels -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NoiseChannel:
    dim: int
    kraus: tuple
    name: str = ""

    def __post_init__(self):
        ks = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ks or any(k.shape != (self.dim, self.dim) for k in ks):
            raise DimensionError(f"Kraus operators must be {self.dim}x{self.dim}")
        object.__setattr__(self, "kraus", ks)

    def completeness_error(self) -> float:
        s = sum(dagger(k) @ k for k in self.kraus)
        return float(np.linalg.norm(s - np.eye(self.dim)))

    def is_cptp(self, tol: float = 1e-10) -> bool:
        return self.completeness_error() < tol

    def apply(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return sum(k @ rho @ dagger(k) for k in self.kraus)

    def superoperator(self) -> np.ndarray:
        """Matrix acting on row-major vec(rho): vec(K rho K^dag) = (K (x) K*) vec(rho)."""
        return sum(np.kron(k, k.conj()) for k in self.kraus)

    def ptm(self) -> np.ndarray:
        """Pauli transfer matrix R_ij = Tr(P_i E(P_j))/D (qubit dimensions only)."""
        n = int(round(np.log2(self.dim)))
        if 2**n != self.dim:
            raise DimensionError("Pauli transfer matrix needs D = 2^n")
        ps = pauli_strings(n)
        return np.array([[np.trace(pi @ self.apply(pj)).real / self.dim for pj in ps] for pi in ps])

    def compose(self, other: "NoiseChannel") -> "NoiseChannel":
        """``self`` after ``other``."""
        return NoiseChannel(self.dim, tuple(a @ b for a in self.kraus for b in other.kraus))


def _check_unit(name: str, value: float) -> None:
    if not 0 <= value <= 1:
        raise DomainError(f"{name}={value} outside [0, 1]")


def weyl_operators(dim: int) -> list[np.ndarray]:
    """Clock-and-shift unitaries X^a Z^b; an orthogonal operator basis of size D^2."""
    omega = np.exp(2j * np.pi / dim)
    shift = np.roll(np.eye(dim), 1, axis=0)
    clock = np.diag(omega ** np.arange(dim))
    return [np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
            for a in range(dim) for b in range(dim)]


def depolarizing(dim: int, p: float) -> NoiseChannel:
    """rho -> p rho + (1 - p) I/D."""
    _check_unit("p", p)
    ops = weyl_operators(dim)
    w_rest = (1 - p) / dim**2
    kraus = [np.sqrt(p + w_rest) * ops[0]] + [np.sqrt(w_rest) * u for u in ops[1:]]
    return NoiseChannel(dim, tuple(k for k in kraus if np.any(k)), f"depolarizing(p={p})")


def dephasing(gamma: float) -> NoiseChannel:
    _check_unit("gamma", gamma)
    k0 = np.diag([1, np.sqrt(1 - gamma)])
    k1 = np.diag([0, np.sqrt(gamma)])
    return NoiseChannel(2, (k0, k1), f"dephasing(gamma={gamma})")


def amplitude_damping(gamma: float) -> NoiseChannel:
    _check_unit("gamma", gamma)
    k0 = np.diag([1, np.sqrt(1 - gamma)])
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]])
    return NoiseChannel(2, (k0, k1), f"amplitude_damping(gamma={gamma})")


def identity_channel(dim: int) -> NoiseChannel:
    return NoiseChannel(dim, (np.eye(dim),), "identity")


def random_cptp(dim: int, n_kraus: int, seed: RngSeed) -> NoiseChannel:
    """Kraus operators cut from a Haar isometry C^D -> C^(D k)."""
    u = sample_haar_unitary(dim * n_kraus, seed)[:, :dim]
    return NoiseChannel(dim, tuple(u[i * dim:(i + 1) * dim] for i in range(n_kraus)), "random")


def kraus_from_superoperator(s: np.ndarray, dim: int, tol: float = 1e-13) -> tuple:
    """Minimal Kraus set from a superoperator via its Choi matrix."""
    choi = s.reshape(dim, dim, dim, dim).transpose(0, 2, 1, 3).reshape(dim * dim, dim * dim)
    w, v = np.linalg.eigh((choi + dagger(choi)) / 2)
    keep = w > tol * max(1.0, w.max())
    return tuple(np.sqrt(wk) * v[:, k].reshape(dim, dim) for k, wk in zip(np.nonzero(keep)[0], w[keep]))


def twirl_channel(ensemble: UnitaryEnsemble, channel: NoiseChannel, n_samples: int = 10_000,
                  seed: RngSeed | None = None) -> NoiseChannel:
    """Lambda(rho) = E_U[U^dag E(U rho U^dag) U], returned with a minimal Kraus set."""
    if ensemble.dim != channel.dim:
        raise DimensionError(f"ensemble D={ensemble.dim} vs channel D={channel.dim}")
    if ensemble.is_explicit:
        us, weights = ensemble.members, ensemble.weights
    else:
        us = ensemble.draw(n_samples, RngSeed.coerce(seed))
        weights = np.full(len(us), 1 / len(us))
    s_noise = channel.superoperator()
    s_u = np.einsum("kij,klm->kiljm", us, us.conj()).reshape(len(us), channel.dim**2, channel.dim**2)
    s = np.einsum("k,kij,jl,klm->im", weights, np.conj(np.swapaxes(s_u, 1, 2)), s_noise, s_u)
    return NoiseChannel(channel.dim, kraus_from_superoperator(s, channel.dim),
                        f"twirled {channel.name}")


def channel_avg_fidelity(channel: NoiseChannel) -> float:
    """Average gate fidelity to the identity: (sum_k |Tr K_k|^2 + D) / (D (D + 1))."""
    d = channel.dim
    return float((sum(abs(np.trace(k)) ** 2 for k in channel.kraus) + d) / (d * (d + 1)))


def avg_gate_fidelity(p: float, dim: int) -> float:
    """Average gate fidelity of a depolarizing channel with parameter p."""
    _check_unit("p", p)
    return ((dim - 1) * p + 1) / dim


def depolarizing_parameter(fidelity: float, dim: int) -> float:
    """Inverse of :func:`avg_gate_fidelity`."""
    return (dim * fidelity - 1) / (dim - 1)


# -- randomized benchmarking ----------------------------------------------------

@dataclass(frozen=True)
class RbFit:
    A: float
    p: float
    B: float
    stderr: tuple[float, float, float] = (np.nan, np.nan, np.nan)
    identifiable: bool = True
    residual: float = 0.0


@dataclass(frozen=True)
class RbResult:
    lengths: np.ndarray
    survival: np.ndarray
    stderr: np.ndarray
    fit: RbFit
    avg_fidelity: float
    dim: int


def _decay(m, a, p, b):
    return a * p**m + b


def fit_rb_decay(lengths, survival, errors=None, dim: int = 2) -> RbFit:
    """Weighted least squares for F(m) = A p^m + B.

    Starts from B0 = 1/D, A0 = F(m_min) - B0 and p0 from a log-linear fit of F - B0.
    Data with no visible decay are reported with ``identifiable=False``, A = 0, p = 1.
    """
    m = np.asarray(lengths, dtype=float)
    f = np.asarray(survival, dtype=float)
    if np.unique(m).size < 4:
        raise FitError("need at least 4 distinct sequence lengths", {"lengths": m.tolist()})
    sigma = None if errors is None else np.asarray(errors, dtype=float)
    if sigma is not None and np.any(sigma <= 0):
        sigma = None
    spread = np.ptp(f)
    noise = np.median(sigma) if sigma is not None else 0.0
    if spread <= max(1e-12, 2 * noise):
        return RbFit(0.0, 1.0, float(f.mean()), identifiable=False)
    b0 = 1 / dim
    a0 = f[np.argmin(m)] - b0
    pos = (f - b0) > 0
    if pos.sum() >= 2 and a0 > 0:
        slope = np.polyfit(m[pos], np.log(f[pos] - b0), 1)[0]
        p0 = float(np.clip(np.exp(slope), 1e-3, 1.0))
    else:
        p0 = 0.9
    try:
        popt, pcov = optimize.curve_fit(
            _decay, m, f, p0=(a0, p0, b0), sigma=sigma, absolute_sigma=sigma is not None,
            ftol=1e-15, xtol=1e-15, gtol=1e-15, maxfev=20_000)
    except (RuntimeError, optimize.OptimizeWarning) as exc:
        resid = f - _decay(m, a0, p0, b0)
        raise FitError(f"RB decay fit did not converge: {exc}", {"residual_rms": float(np.sqrt(np.mean(resid**2)))})
    resid = f - _decay(m, *popt)
    with np.errstate(invalid="ignore"):
        err = tuple(float(x) for x in np.sqrt(np.diag(pcov)))
    return RbFit(float(popt[0]), float(popt[1]), float(popt[2]), err, True,
                 float(np.sqrt(np.mean(resid**2))))


def rb_survival_sequences(n_qubits: int, noise: NoiseChannel | None, length: int, n_sequences: int,
                          seed: RngSeed, prep: NoiseChannel | None = None,
                          meas: NoiseChannel | None = None) -> np.ndarray:
    """Exact survival probability of each random Clifford sequence of ``length`` gates plus inversion."""
    group = clifford_group(n_qubits)
    cl = group.members
    d = group.dim
    lookup = _inverse_lookup(n_qubits)
    s_gates = np.einsum("kij,klm->kiljm", cl, cl.conj()).reshape(len(cl), d * d, d * d)
    if noise is not None:
        if noise.dim != d:
            raise DimensionError(f"noise channel D={noise.dim} does not match {n_qubits} qubit(s)")
        s_gates = noise.superoperator() @ s_gates
    rho0 = np.zeros((d, d), dtype=complex)
    rho0[0, 0] = 1
    if prep is not None:
        rho0 = prep.apply(rho0)
    idx = seed.generator().integers(len(cl), size=(n_sequences, length))
    v = np.tile(rho0.reshape(-1), (n_sequences, 1))
    net = np.tile(np.eye(d, dtype=complex), (n_sequences, 1, 1))
    for j in range(length):
        v = np.einsum("sij,sj->si", s_gates[idx[:, j]], v)
        net = cl[idx[:, j]] @ net
    inv = np.array([lookup[phase_key(dagger(u))] for u in net])
    v = np.einsum("sij,sj->si", s_gates[inv], v)
    rho = v.reshape(n_sequences, d, d)
    if meas is not None:
        rho = np.stack([meas.apply(r) for r in rho])
    return np.clip(rho[:, 0, 0].real, 0.0, 1.0)


_LOOKUPS: dict[int, dict[bytes, int]] = {}


def _inverse_lookup(n_qubits: int) -> dict[bytes, int]:
    if n_qubits not in _LOOKUPS:
        _LOOKUPS[n_qubits] = {phase_key(u): k for k, u in enumerate(clifford_group(n_qubits).members)}
    return _LOOKUPS[n_qubits]


def rb_experiment(n_qubits: int, noise: NoiseChannel | None, lengths: Sequence[int], n_sequences: int,
                  shots: int | None, seed: RngSeed, prep: NoiseChannel | None = None,
                  meas: NoiseChannel | None = None) -> RbResult:
    """Clifford RB with the same noise after every gate, inversion gate included.

    Each sequence is measured ``shots`` times (binomial); ``shots=None`` keeps the exact
    survival probabilities.
    """
    if n_qubits not in (1, 2):
        raise DomainError("RB supports 1 or 2 qubits")
    lengths = np.asarray(lengths, dtype=int)
    if np.any(lengths < 1):
        raise DomainError("sequence lengths must be >= 1")
    d = 2**n_qubits
    means, errs = [], []
    for i, m in enumerate(lengths):
        s = seed.child(i)
        probs = rb_survival_sequences(n_qubits, noise, int(m), n_sequences, s.child(0), prep, meas)
        if shots:
            probs = s.child(1).generator().binomial(shots, probs) / shots
        means.append(probs.mean())
        errs.append(probs.std(ddof=1) / np.sqrt(n_sequences) if n_sequences > 1 else 0.0)
    means, errs = np.array(means), np.array(errs)
    fit = fit_rb_decay(lengths, means, errs, d)
    return RbResult(lengths, means, errs, fit, avg_gate_fidelity(min(max(fit.p, 0.0), 1.0), d), d)


# -- cross-entropy benchmarking ---------------------------------------------------

def porter_thomas_pdf(p, n_qubits: int):
    """Exponential density 2^n exp(-2^n p) of output probabilities."""
    d = 2.0**n_qubits
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise DomainError("probabilities must be nonnegative")
    out = d * np.exp(-d * p)
    return float(out) if out.ndim == 0 else out


def porter_thomas_ks(scaled_probs) -> float:
    """KS distance of 2^n P values to the unit exponential."""
    return float(stats.kstest(np.asarray(scaled_probs), "expon").statistic)


def xeb_fidelity(ideal_probs, samples, normalized: bool = False) -> float:
    """Linear XEB estimator 2^n <P_ideal(x)>_samples - 1.

    With ``normalized=True`` the estimate is divided by 2^n sum P_ideal^2 - 1, its value
    for samples drawn from the ideal distribution itself.
    """
    probs = np.asarray(ideal_probs, dtype=float)
    samples = np.asarray(samples, dtype=int)
    if samples.size == 0:
        raise DomainError("no samples")
    if abs(probs.sum() - 1) > 1e-9:
        raise DomainError(f"ideal probabilities sum to {probs.sum()!r}")
    d = probs.size
    raw = d * probs[samples].mean() - 1
    if not normalized:
        return float(raw)
    return float(raw / (d * np.sum(probs**2) - 1))


@dataclass(frozen=True)
class XebResult:
    depth: int
    f_xeb: float
    stderr: float
    n_circuits: int
    shots: int
    f_xeb_normalized: float = np.nan
    stderr_normalized: float = np.nan
    scaled_probs: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)


def _apply_layer_noise(rho: np.ndarray, noise: NoiseChannel, n_qubits: int) -> np.ndarray:
    d = 2**n_qubits
    if noise.dim == d:
        return noise.apply(rho)
    if noise.dim != 2:
        raise DimensionError("layer noise must act on one qubit or on the whole register")
    for q in range(n_qubits):
        out = np.zeros_like(rho)
        for k in noise.kraus:
            kq = np.kron(np.kron(np.eye(2**q), k), np.eye(2 ** (n_qubits - q - 1)))
            out += kq @ rho @ dagger(kq)
        rho = out
    return rho


def _noisy_output(gates, n_qubits: int, depth: int, noise: NoiseChannel) -> np.ndarray:
    d = 2**n_qubits
    rho = np.zeros((d, d), dtype=complex)
    rho[0, 0] = 1
    per_layer: dict[int, list] = {}
    layer, count = 0, 0
    layer_sizes = [len(range(l % 2, n_qubits - 1, 2)) for l in range(depth)]
    for size in layer_sizes:
        per_layer[layer] = gates[count:count + size]
        count += size
        layer += 1
    for l in range(depth):
        for q, g in per_layer[l]:
            rho = apply_two_qubit_gate(rho, g, q, n_qubits)
            rho = apply_two_qubit_gate(rho.conj().T, g, q, n_qubits).conj().T
        rho = _apply_layer_noise(rho, noise, n_qubits)
    return np.clip(np.diagonal(rho).real, 0, None)


def xeb_experiment(n_qubits: int, depths: Sequence[int], noise: NoiseChannel | None,
                   n_circuits: int, shots: int, seed: RngSeed) -> list[XebResult]:
    """Brick-wall XEB: exact ideal probabilities, noisy density-matrix sampling."""
    if n_qubits > 8:
        raise BudgetError("XEB simulation is limited to 8 qubits")
    d = 2**n_qubits
    results = []
    for i, depth in enumerate(depths):
        fs, fns, scaled = [], [], []
        for c in range(n_circuits):
            s = seed.child(i).child(c)
            gates = brick_wall_gates(n_qubits, int(depth), s.child(0))
            psi = np.zeros(d, dtype=complex)
            psi[0] = 1
            for q, g in gates:
                psi = apply_two_qubit_gate(psi, g, q, n_qubits)
            ideal = np.abs(psi) ** 2
            ideal /= ideal.sum()
            exp = ideal if noise is None else _noisy_output(gates, n_qubits, int(depth), noise)
            exp = exp / exp.sum()
            samples = s.child(1).generator().choice(d, size=shots, p=exp)
            fs.append(xeb_fidelity(ideal, samples))
            fns.append(xeb_fidelity(ideal, samples, normalized=True))
            scaled.append(d * ideal)
        fs, fns = np.array(fs), np.array(fns)
        se = fs.std(ddof=1) / np.sqrt(n_circuits) if n_circuits > 1 else np.nan
        sen = fns.std(ddof=1) / np.sqrt(n_circuits) if n_circuits > 1 else np.nan
        results.append(XebResult(int(depth), float(fs.mean()), float(se), n_circuits, shots,
                                 float(fns.mean()), float(sen), np.concatenate(scaled)))
    return results
