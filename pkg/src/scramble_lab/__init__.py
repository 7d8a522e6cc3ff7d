"""Numerics for Haar randomness, induced spectra, chaos diagnostics, unitary designs
and device benchmarks."""

__version__ = "0.1.0"

from .rng import RngSeed  # noqa: E402,F401
