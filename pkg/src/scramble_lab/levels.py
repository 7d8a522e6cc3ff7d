"""Level statistics: unfolding, nearest-neighbour spacings, number variance."""
from __future__ import annotations

import numpy as np
from scipy import special, stats
from scipy.interpolate import PchipInterpolator

from .errors import DomainError

MIN_LEVELS = 16


def _surmise_constants(beta: int) -> tuple[float, float]:
    if beta not in (1, 2, 4):
        raise DomainError(f"unsupported Dyson index beta={beta!r}")
    g1 = special.gamma((beta + 1) / 2)
    g2 = special.gamma((beta + 2) / 2)
    c = (g2 / g1) ** 2
    a = 2 * g2 ** (beta + 1) / g1 ** (beta + 2)
    return a, c


def spacing_pdf(s, beta: int = 2):
    """Wigner surmise a s^beta exp(-c s^2), unit normalization and unit mean."""
    a, c = _surmise_constants(beta)
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("spacing must be nonnegative")
    out = a * s**beta * np.exp(-c * s**2)
    return float(out) if out.ndim == 0 else out


def spacing_cdf(s, beta: int = 2):
    _, c = _surmise_constants(beta)
    s = np.clip(np.asarray(s, dtype=float), 0, None)
    out = special.gammainc((beta + 1) / 2, c * s**2)
    return float(out) if out.ndim == 0 else out


def poisson_spacing_pdf(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("spacing must be nonnegative")
    out = np.exp(-s)
    return float(out) if out.ndim == 0 else out


def poisson_spacing_cdf(s):
    return 1 - np.exp(-np.clip(np.asarray(s, dtype=float), 0, None))


def smooth_counting_function(reference, n_knots: int = 20, per_spectrum: int | None = None):
    """Monotone cubic fit of the empirical integrated density of ``reference``.

    ``per_spectrum`` rescales a pooled reference (many spectra) to the count of a
    single spectrum.
    """
    ref = np.sort(np.asarray(reference, dtype=float).ravel())
    if ref.size < MIN_LEVELS:
        raise DomainError(f"need at least {MIN_LEVELS} levels to unfold, got {ref.size}")
    ranks = np.arange(ref.size, dtype=float) + 0.5
    idx = np.unique(np.linspace(0, ref.size - 1, n_knots).round().astype(int))
    x, y = ref[idx], ranks[idx]
    keep = np.concatenate([[True], np.diff(x) > 0])
    fit = PchipInterpolator(x[keep], y[keep], extrapolate=True)
    scale = 1.0 if per_spectrum is None else per_spectrum / ref.size
    return lambda e: scale * fit(e)


def unfold(levels, reference=None, n_knots: int = 20) -> np.ndarray:
    """Map levels through a smoothed counting function to unit mean spacing.

    Without ``reference`` the result is rescaled so the mean spacing is exactly one.
    With a pooled ``reference`` (e.g. all spectra of an ensemble) the counting function
    is shared, and the mean spacing is one only on average over the ensemble.
    """
    lv = np.sort(np.asarray(levels, dtype=float).ravel())
    if lv.size < MIN_LEVELS:
        raise DomainError(f"need at least {MIN_LEVELS} levels to unfold, got {lv.size}")
    if reference is None:
        x = smooth_counting_function(lv, n_knots)(lv)
        span = x[-1] - x[0]
        return (x - x[0]) * (lv.size - 1) / span
    return smooth_counting_function(reference, n_knots, per_spectrum=lv.size)(lv)


def bulk_spacings(unfolded, edge_fraction: float = 0.1) -> np.ndarray:
    """Nearest-neighbour spacings with ``edge_fraction`` of levels dropped at each end."""
    x = np.sort(np.asarray(unfolded, dtype=float))
    cut = int(np.floor(edge_fraction * x.size))
    core = x[cut:x.size - cut] if cut else x
    return np.diff(core)


def ensemble_spacings(spectra, n_knots: int = 20, edge_fraction: float = 0.1) -> np.ndarray:
    """Bulk spacings of every spectrum in a batch, unfolded with the pooled counting
    function and normalized to unit mean."""
    spectra = np.sort(np.asarray(spectra, dtype=float), axis=-1)
    count = smooth_counting_function(spectra.ravel(), n_knots, per_spectrum=spectra.shape[-1])
    s = np.concatenate([bulk_spacings(count(row), edge_fraction) for row in spectra])
    return s / s.mean()


def spacing_ks(spacings, beta: int | None = 2) -> float:
    """Kolmogorov distance to the Wigner surmise (``beta=None``: Poisson)."""
    cdf = poisson_spacing_cdf if beta is None else (lambda s: spacing_cdf(s, beta))
    return float(stats.kstest(np.asarray(spacings), cdf).statistic)


def number_variance(unfolded, L: float, n_windows: int | None = None) -> float:
    """Sigma^2(L) = <(N(L) - L)^2> over sliding windows [E, E + L)."""
    x = np.sort(np.asarray(unfolded, dtype=float))
    span = x[-1] - x[0]
    if not 0 < L < span / 4:
        raise DomainError(f"window L={L} must satisfy 0 < L < span/4 = {span / 4:.3g}")
    n_windows = n_windows or max(int(4 * span), 100)
    starts = np.linspace(x[0], x[-1] - L, n_windows)
    counts = np.searchsorted(x, starts + L, side="left") - np.searchsorted(x, starts, side="left")
    return float(np.mean((counts - L) ** 2))
