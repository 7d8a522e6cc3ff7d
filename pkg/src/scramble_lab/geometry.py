"""Bi-invariant Riemannian geometry of U(D) and the Euler-angle chart of SU(2)."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .linalg import dagger, evolve_unitary, is_hermitian, is_unitary

COARSE_STEP = 0.5


@dataclass(frozen=True)
class UnitaryPath:
    times: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        points = np.asarray(self.points, dtype=complex)
        if points.ndim != 3 or len(points) != len(times):
            raise DimensionError("need one square matrix per time")
        if np.any(np.diff(times) <= 0):
            raise DomainError("times must be strictly increasing")
        if not all(is_unitary(u, 1e-9) for u in points):
            raise DomainError("path point is not unitary")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)

    @classmethod
    def from_hamiltonian(cls, h, t_final: float, steps: int) -> "UnitaryPath":
        times = np.linspace(0.0, t_final, steps + 1)
        return cls(times, np.stack([evolve_unitary(h, t) for t in times]))

    def left(self, v) -> "UnitaryPath":
        return UnitaryPath(self.times, np.asarray(v) @ self.points)

    def right(self, v) -> "UnitaryPath":
        return UnitaryPath(self.times, self.points @ np.asarray(v))


def path_length(path: UnitaryPath) -> float:
    """Sum of chord lengths sqrt(Tr dU^dag dU) between neighbouring points."""
    if len(path.points) < 2:
        raise DomainError("a path needs at least two points")
    du = np.diff(path.points, axis=0)
    steps = np.sqrt(np.einsum("kij,kij->k", du.conj(), du).real)
    if steps.max() >= COARSE_STEP:
        warnings.warn(f"coarse path discretization (max step {steps.max():.3f})", RuntimeWarning)
    return float(steps.sum())


def tangent_skewness(path: UnitaryPath) -> float:
    """Largest ||U^dag dU + dU^dag U||_F over the path; vanishes to second order in the step."""
    u = path.points[:-1]
    du = np.diff(path.points, axis=0)
    x = dagger(u) @ du
    return float(np.max(np.linalg.norm(x + dagger(x), axis=(1, 2))))


def geodesic_length(h, t: float) -> float:
    """Length t sqrt(Tr H^2) of the one-parameter path exp(-iHt)."""
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise DomainError("generator must be Hermitian")
    return float(abs(t) * np.sqrt(np.trace(h @ h).real))


def su2_unitary(alpha: float, beta: float, gamma: float, delta: float) -> np.ndarray:
    """e^{i alpha} [[e^{i beta} cos g, e^{i delta} sin g], [-e^{-i delta} sin g, e^{-i beta} cos g]]."""
    c, s = np.cos(gamma), np.sin(gamma)
    return np.exp(1j * alpha) * np.array([
        [np.exp(1j * beta) * c, np.exp(1j * delta) * s],
        [-np.exp(-1j * delta) * s, np.exp(-1j * beta) * c],
    ])


@dataclass(frozen=True)
class Su2Metric:
    g_bb: float
    g_gg: float
    g_dd: float

    def scaled(self, factor: float) -> "Su2Metric":
        return Su2Metric(factor * self.g_bb, factor * self.g_gg, factor * self.g_dd)


def su2_metric(gamma: float, normalized: bool = True) -> Su2Metric:
    """Diagonal metric coefficients in the (beta, gamma, delta) chart.

    Normalized (round unit three-sphere): cos^2 g, 1, sin^2 g.  With ``normalized=False``
    the raw Tr(dV^dag dV) coefficients are returned, twice as large.
    """
    m = Su2Metric(np.cos(gamma) ** 2, 1.0, np.sin(gamma) ** 2)
    return m if normalized else m.scaled(2.0)


def numerical_metric(beta: float, gamma: float, delta: float, step: float = 1e-5) -> np.ndarray:
    """Tr(dV^dag_i dV_j) in the (beta, gamma, delta) chart by central differences (raw scale)."""
    x0 = np.array([beta, gamma, delta], dtype=float)
    derivs = []
    for i in range(3):
        e = np.zeros(3)
        e[i] = step
        plus = su2_unitary(0.0, *(x0 + e))
        minus = su2_unitary(0.0, *(x0 - e))
        derivs.append((plus - minus) / (2 * step))
    g = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            g[i, j] = np.trace(dagger(derivs[i]) @ derivs[j]).real
    return g
