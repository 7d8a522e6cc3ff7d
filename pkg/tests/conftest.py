import numpy as np
import pytest

from scramble_lab.rng import RngSeed


@pytest.fixture
def seed():
    return RngSeed(12345)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def random_density(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)
