import numpy as np
import pytest
from scipy import stats

from scramble_lab.errors import DimensionError
from scramble_lab.haar import (
    StateVector, concentration_experiment, haar_from_ginibre, overlap_moments, overlap_pdf,
    overlap_samples, sample_ginibre, sample_haar_state, sample_haar_unitary,
)
from scramble_lab.linalg import PAULI_Z, is_unitary
from scramble_lab.rng import RngSeed


def test_state_vector_validates_norm():
    with pytest.raises(ValueError):
        StateVector(np.array([1.0, 1.0]))
    assert StateVector.normalized([3, 4]).amplitudes[1] == pytest.approx(0.8)


def test_ginibre_moments(seed):
    g = sample_ginibre(200, 200, seed)
    assert abs(np.mean(np.abs(g) ** 2) - 1) < 0.01
    assert abs(np.mean(g**2)) < 0.01


def test_haar_unitary_is_unitary(seed):
    for d in (1, 2, 7, 32):
        assert is_unitary(sample_haar_unitary(d, seed.child(d)), 1e-10)


def test_phase_fix_gives_upper_triangular_positive_r(seed):
    g = sample_ginibre(6, 6, seed)
    u = haar_from_ginibre(g)
    r = u.conj().T @ g
    assert np.allclose(np.tril(r, -1), 0, atol=1e-10)
    assert np.all(np.diag(r).real > 0) and np.allclose(np.diag(r).imag, 0, atol=1e-10)


def test_dimension_one_is_uniform_phase(seed):
    phases = np.array([sample_haar_unitary(1, seed.child(i))[0, 0] for i in range(4000)])
    assert abs(phases.mean()) < 5 / np.sqrt(4000)
    assert stats.kstest(np.angle(phases), stats.uniform(-np.pi, 2 * np.pi).cdf).pvalue > 1e-3


def test_entry_second_moment(seed):
    d, n = 4, 3000
    sq = np.array([np.abs(sample_haar_unitary(d, seed.child(i))) ** 2 for i in range(n)])
    se = sq.std(axis=0, ddof=1) / np.sqrt(n)
    assert np.all(np.abs(sq.mean(axis=0) - 1 / d) < 5 * se)


def test_overlap_law_matches_beta_oracle(seed):
    d = 16
    oracle = stats.beta(1, d - 1)
    chi = overlap_samples(d, 4000, seed)
    assert stats.kstest(chi, oracle.cdf).pvalue > 1e-3
    x = np.linspace(0.01, 0.9, 9)
    np.testing.assert_allclose(overlap_pdf(x, d), oracle.pdf(x), rtol=1e-10)
    mean, var = overlap_moments(d)
    assert mean == pytest.approx(oracle.mean()) and var == pytest.approx(oracle.var())


def test_left_invariance(seed):
    d = 5
    v = sample_haar_unitary(d, RngSeed(99))
    plain = [sample_haar_unitary(d, seed.child(i))[0, 0] for i in range(3000)]
    rotated = [(v @ sample_haar_unitary(d, seed.child(10_000 + i)))[0, 0] for i in range(3000)]
    assert stats.ks_2samp(np.abs(plain), np.abs(rotated)).pvalue > 1e-3
    assert stats.ks_2samp(np.angle(plain), np.angle(rotated)).pvalue > 1e-3


def test_state_matches_unitary_column(seed):
    d = 6
    states = [abs(sample_haar_state(d, seed.child(i)).amplitudes[0]) ** 2 for i in range(3000)]
    columns = [abs(sample_haar_unitary(d, seed.child(5000 + i))[0, 0]) ** 2 for i in range(3000)]
    assert stats.ks_2samp(states, columns).pvalue > 1e-3


def test_concentration_mean_and_variance(seed):
    m, n = 2, 8
    rec = concentration_experiment(m * n, PAULI_Z, 8000, seed)
    a = np.kron(PAULI_Z, np.eye(n))
    d = m * n
    # Var <psi|A|psi> = (Tr A^2 / D - (Tr A / D)^2) / (D + 1) for Haar psi
    var_oracle = (np.trace(a @ a).real / d - (np.trace(a).real / d) ** 2) / (d + 1)
    assert rec.predicted_mean == 0.0
    assert abs(rec.mean) < 5 * rec.standard_error
    assert rec.variance == pytest.approx(var_oracle, rel=0.06)


def test_concentration_rejects_bad_size(seed):
    with pytest.raises(DimensionError):
        concentration_experiment(9, PAULI_Z, 10, seed)
