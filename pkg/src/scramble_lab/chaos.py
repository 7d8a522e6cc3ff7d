"""Dynamical chaos diagnostics: spectral form factor, OTOCs, commutator light cones,
Lyapunov fits and scrambling-time estimates."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError, DomainError, FitError
from .linalg import dagger, evolve_unitary, is_unitary, operator_norm
from .models import HamiltonianModel
from .rng import RngSeed, map_streams

IDENTITY_TOL = 1e-9


# -- spectral form factor ---------------------------------------------------

def partition_function(eigenvalues, beta: float, t) -> np.ndarray:
    """Z(beta + i t) for each time in ``t``."""
    e = np.asarray(eigenvalues, dtype=float)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    shift = e.min() if beta > 0 else 0.0  # keeps exp() finite; undone below
    weights = np.exp(-beta * (e - shift))
    z = np.exp(-1j * np.outer(t, e)) @ weights
    return z * np.exp(-beta * shift)


def sff(eigenvalues, beta: float, t):
    """K(beta, t) = |Z(beta + i t)|^2, unnormalized."""
    e = np.asarray(eigenvalues, dtype=float)
    if e.size == 0:
        raise DomainError("empty spectrum")
    k = np.abs(partition_function(e, beta, t)) ** 2
    return float(k[0]) if np.ndim(t) == 0 else k


@dataclass(frozen=True)
class SffCurve:
    times: np.ndarray
    values: np.ndarray
    normalized: np.ndarray
    beta: float
    n_samples: int
    standard_errors: np.ndarray


def sff_curve(model_sampler: Callable[[RngSeed], HamiltonianModel | np.ndarray], times,
              beta: float, n_samples: int, seed: RngSeed) -> SffCurve:
    """Ensemble-averaged SFF over ``n_samples`` independent draws.

    ``model_sampler`` returns either a :class:`HamiltonianModel` or a bare spectrum.
    ``normalized`` is the ensemble mean of K/Z(beta)^2.
    """
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise DomainError("times must be ascending")

    def one(s: RngSeed):
        draw = model_sampler(s)
        e = draw.eigenvalues if isinstance(draw, HamiltonianModel) else np.asarray(draw)
        if e.size < 2:
            raise DomainError("SFF needs at least two eigenvalues")
        k = sff(e, beta, times)
        return k, k / sff(e, beta, 0.0)

    rows = map_streams(one, seed, n_samples)
    k = np.stack([r[0] for r in rows])
    kn = np.stack([r[1] for r in rows])
    se = k.std(axis=0, ddof=1) / np.sqrt(n_samples) if n_samples > 1 else np.zeros(times.size)
    return SffCurve(times, k.mean(axis=0), kn.mean(axis=0), beta, n_samples, se)


@dataclass(frozen=True)
class DipRampPlateau:
    dip_time: float
    dip_value: float
    ramp_window: tuple[float, float] | None
    ramp_slope: float
    plateau: float
    has_dip: bool
    has_ramp: bool


def analyze_sff(curve: SffCurve, late_time: float, smooth: int = 7,
                min_ramp_decades: float = 0.5, min_slope: float = 0.5) -> DipRampPlateau:
    """Locate dip, ramp and plateau on a log-spaced SFF curve.

    The plateau is the mean of K for t >= ``late_time``.  The dip is the minimum of
    the log-smoothed curve before ``late_time``.  A ramp is a stretch after the dip,
    below half the plateau, spanning ``min_ramp_decades`` in t, where log K rises
    against log t with slope above ``min_slope``.
    """
    t, k = curve.times, curve.values
    late = t >= late_time
    if late.sum() < 3 or (~late).sum() < smooth:
        raise DomainError("time grid does not resolve both the plateau and the early curve")
    plateau = float(k[late].mean())
    logk = np.convolve(np.log(k), np.ones(smooth) / smooth, mode="same")
    half = smooth // 2
    valid = np.arange(half, t.size - half)
    early = valid[t[valid] < late_time]
    i_dip = int(early[np.argmin(logk[early])])
    has_dip = logk[half] > logk[i_dip] + np.log(2)
    ramp = np.arange(i_dip, t.size - half)
    ramp = ramp[logk[ramp] < np.log(0.5 * plateau)]
    if ramp.size >= 3:
        # contiguous run starting at the dip
        breaks = np.nonzero(np.diff(ramp) > 1)[0]
        ramp = ramp[: breaks[0] + 1] if breaks.size else ramp
    window, slope, has_ramp = None, 0.0, False
    if ramp.size >= 3:
        lt = np.log10(t[ramp])
        slope = float(np.polyfit(lt, logk[ramp] / np.log(10), 1)[0])
        window = (float(t[ramp[0]]), float(t[ramp[-1]]))
        has_ramp = bool(lt[-1] - lt[0] >= min_ramp_decades and slope > min_slope)
    return DipRampPlateau(float(t[i_dip]), float(np.exp(logk[i_dip])), window, slope, plateau,
                          bool(has_dip), has_ramp)


# -- OTOCs -------------------------------------------------------------------

def heisenberg(w, u_t) -> np.ndarray:
    """W(t) = U^dag W U."""
    w, u_t = np.asarray(w), np.asarray(u_t)
    if w.shape != u_t.shape:
        raise DimensionError(f"operator {w.shape} and propagator {u_t.shape} differ")
    return dagger(u_t) @ w @ u_t


@dataclass(frozen=True)
class OtocPoint:
    t: float
    F: complex
    C: float
    identity_checked: bool = True


def thermal_state(model: HamiltonianModel, beta: float) -> np.ndarray | None:
    """e^{-beta H}/Z; ``None`` for beta = 0 (maximally mixed, handled as Tr/D)."""
    if beta < 0:
        raise DomainError("beta must be nonnegative")
    if beta == 0:
        return None
    e, v = model.eigen.eigenvalues, model.eigen.eigenvectors
    w = np.exp(-beta * (e - e.min()))
    return (v * (w / w.sum())) @ dagger(v)


def _expect(op: np.ndarray, rho: np.ndarray | None) -> complex:
    if rho is None:
        return complex(np.trace(op) / op.shape[0])
    return complex(np.einsum("ij,ji->", rho, op))


def otoc(w, v, model: HamiltonianModel, t: float, beta: float = 0.0,
         rho: np.ndarray | None = None) -> OtocPoint:
    """F = <W^dag(t) V^dag W(t) V> and C = <[W(t),V]^dag [W(t),V]> in the thermal state.

    For unitary probes the identity C = 2(1 - Re F) is enforced to 1e-9; otherwise
    the point carries ``identity_checked=False``.
    """
    w, v = np.asarray(w, dtype=complex), np.asarray(v, dtype=complex)
    if w.shape != model.matrix.shape or v.shape != model.matrix.shape:
        raise DimensionError("probe operators must match the Hamiltonian dimension")
    if rho is None:
        rho = thermal_state(model, beta)
    wt = heisenberg(w, evolve_unitary(model.matrix, t, model.eigen))
    f = _expect(dagger(wt) @ dagger(v) @ wt @ v, rho)
    comm = wt @ v - v @ wt
    c = _expect(dagger(comm) @ comm, rho).real
    unitary = is_unitary(w) and is_unitary(v)
    if unitary and abs(c - 2 * (1 - f.real)) > IDENTITY_TOL:
        raise FitError("squared-commutator identity violated",
                       {"t": t, "C": c, "F": f, "residual": c - 2 * (1 - f.real)})
    return OtocPoint(float(t), f, float(c), unitary)


def otoc_series(w, v, model: HamiltonianModel, times: Sequence[float],
                beta: float = 0.0) -> list[OtocPoint]:
    rho = thermal_state(model, beta)
    return [otoc(w, v, model, t, beta, rho) for t in times]


def commutator_cone(model: HamiltonianModel, site_ops: Sequence[np.ndarray], times,
                    source: int = 0) -> np.ndarray:
    """Operator norms ||[O_source(t), O_y]|| for every time (rows) and site y (columns)."""
    ops = [np.asarray(o, dtype=complex) for o in site_ops]
    out = np.empty((len(times), len(ops)))
    for i, t in enumerate(times):
        ot = heisenberg(ops[source], evolve_unitary(model.matrix, t, model.eigen))
        for y, oy in enumerate(ops):
            out[i, y] = operator_norm(ot @ oy - oy @ ot)
    return out


def front_positions(cone: np.ndarray, source: int = 0, threshold: float = 0.1) -> np.ndarray:
    """Largest distance from ``source`` where the commutator norm reaches threshold * max."""
    cone = np.asarray(cone)
    level = threshold * cone.max()
    dist = np.abs(np.arange(cone.shape[1]) - source)
    return np.array([dist[row >= level].max() if np.any(row >= level) else 0 for row in cone])


# -- growth rates and scrambling ------------------------------------------------

def scrambling_time(lambda_l: float, size: float, mode: str = "sites") -> float:
    """t* = log(size)/lambda_L; ``size`` is a site count (mode 'sites') or an entropy S ('entropy')."""
    if mode not in ("sites", "entropy"):
        raise DomainError(f"unknown mode {mode!r}")
    if lambda_l <= 0 or size <= 1:
        raise DomainError("scrambling time needs lambda_L > 0 and size > 1")
    return float(np.log(size) / lambda_l)


@dataclass(frozen=True)
class LyapunovFit:
    lambda_l: float
    r_squared: float
    bound_ratio: float
    n_points: int

    @property
    def exceeds_bound(self) -> bool:
        return bool(self.bound_ratio > 1)


def lyapunov_fit(points: Sequence[OtocPoint], window: tuple[float, float] = (1e-3, 1e-1),
                 temperature: float | None = None, min_points: int = 5) -> LyapunovFit:
    """Fit C(t) ~ eps exp(2 lambda_L t) on points whose C lies inside ``window``.

    ``bound_ratio`` is lambda_L / (2 pi T), NaN when no temperature is given.
    """
    lo, hi = window
    t = np.array([p.t for p in points], dtype=float)
    c = np.array([p.C for p in points], dtype=float)
    sel = (c >= lo) & (c <= hi) & (c > 0)
    diag = {"in_window": int(sel.sum()), "window": window, "C_range": (float(c.min()), float(c.max()))}
    if sel.sum() < min_points:
        raise FitError(f"only {sel.sum()} points inside C window {window}", diag)
    tt, y = t[sel], np.log(c[sel])
    if np.ptp(tt) == 0:
        raise FitError("in-window points share a single time", diag)
    slope, intercept = np.polyfit(tt, y, 1)
    resid = y - (slope * tt + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 0.0
    if slope <= 1e-12 or ss_tot == 0 or r2 < 0.5:
        diag.update(slope=float(slope), r_squared=float(r2))
        raise FitError("no exponential growth in window (OTOC flat or saturated)", diag)
    lam = slope / 2
    ratio = lam / (2 * np.pi * temperature) if temperature else float("nan")
    return LyapunovFit(float(lam), float(r2), float(ratio), int(sel.sum()))
