import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from scramble_lab.errors import ConventionError
from scramble_lab.haar import StateVector
from scramble_lab.spectra import (
    BipartiteSplit, EntanglementSpectrum, coefficient_matrix, log_joint_density, moment_predictions,
    mp_edges, mp_l1_distance, mp_pdf, page_entropy, purity, reduced_density_from_state,
    sample_spectra, von_neumann_entropy,
)


def test_two_by_four_closed_forms():
    p = moment_predictions(BipartiteSplit(2, 4))
    assert p.mean_eig == 0.5
    assert p.purity_mean == pytest.approx(2 / 3)
    assert p.var_eig == pytest.approx(1 / 12)
    assert p.page_exact == pytest.approx(1 / 5 + 1 / 6 + 1 / 7 + 1 / 8 - 1 / 8)
    assert p.page_asymptotic == pytest.approx(np.log(2) - 0.25)


def test_page_entropy_symmetric_and_small_cases():
    assert page_entropy(3, 7) == page_entropy(7, 3)
    assert page_entropy(1, 5) == pytest.approx(0.0, abs=1e-15)
    # two qubits: sum_{k=3}^4 1/k - 1/4
    assert page_entropy(2, 2) == pytest.approx(1 / 3)


def test_second_moment_consistent_with_purity():
    for m, n in [(2, 2), (3, 5), (4, 16)]:
        p = moment_predictions(BipartiteSplit(m, n))
        assert m * p.second_moment == pytest.approx(p.purity_mean)
        assert p.var_eig == pytest.approx(p.second_moment - p.mean_eig**2)


@pytest.mark.parametrize("m,n", [(2, 4), (4, 4), (3, 8)])
def test_monte_carlo_purity_and_entropy(seed, m, n):
    split = BipartiteSplit(m, n)
    lam = sample_spectra(split, 4000, seed)
    p = moment_predictions(split)
    pur, ent = purity(lam), von_neumann_entropy(lam)
    assert abs(pur.mean() - p.purity_mean) < 5 * pur.std() / np.sqrt(len(pur))
    assert abs(ent.mean() - p.page_exact) < 5 * ent.std() / np.sqrt(len(ent))
    # the marginal law is that of an unordered eigenvalue, so pool them
    assert abs(lam.ravel().var() - p.var_eig) < 0.05 * p.var_eig


def test_mp_edges_and_normalization():
    split = BipartiteSplit(4, 16)
    lo, hi = mp_edges(split)
    assert lo == pytest.approx(0.5**2 / 4)
    assert hi == pytest.approx(1.5**2 / 4)
    total = integrate.quad(mp_pdf, lo, hi, args=(split,), limit=200)[0]
    mean = integrate.quad(lambda x: x * mp_pdf(x, split), lo, hi, limit=200)[0]
    assert total == pytest.approx(1.0, abs=1e-8)
    assert mean == pytest.approx(1 / 4, abs=1e-8)
    assert mp_pdf(hi + 0.1, split) == 0.0


def test_mp_l1_shrinks_with_dimension(seed):
    small = BipartiteSplit(8, 32)
    big = BipartiteSplit(32, 128)
    d_small = mp_l1_distance(sample_spectra(small, 200, seed), small)
    d_big = mp_l1_distance(sample_spectra(big, 50, seed), big)
    assert d_big < d_small


def test_log_joint_degenerate_and_ordering():
    split = BipartiteSplit(2, 4)
    assert np.isneginf(log_joint_density([1.0, 0.0], split))
    assert np.isneginf(log_joint_density([0.5, 0.5], split))
    a = log_joint_density([0.3, 0.7], split)
    assert a == pytest.approx(2 * np.log(0.21) + 2 * np.log(0.4))
    assert a == log_joint_density([0.7, 0.3], split)


def test_entropy_and_purity_extremes():
    assert von_neumann_entropy(EntanglementSpectrum(np.ones(4) / 4)) == pytest.approx(np.log(4))
    assert von_neumann_entropy(EntanglementSpectrum(np.array([1.0, 0, 0]))) == 0.0
    assert purity(np.ones(4) / 4) == pytest.approx(0.25)


def test_convention_error():
    with pytest.raises(ConventionError):
        moment_predictions(BipartiteSplit(4, 2))
    assert BipartiteSplit(4, 2).canonical() == BipartiteSplit(2, 4)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_reduced_spectra_agree_on_both_sides(m, n, s):
    rng = np.random.default_rng(s)
    psi = StateVector.normalized(rng.normal(size=m * n) + 1j * rng.normal(size=m * n))
    rho_a = reduced_density_from_state(psi, BipartiteSplit(m, n))
    c = coefficient_matrix(psi, BipartiteSplit(m, n))
    rho_b = c.T @ c.conj()
    ea = np.sort(np.linalg.eigvalsh(rho_a))[::-1]
    eb = np.sort(np.linalg.eigvalsh(rho_b))[::-1]
    k = min(m, n)
    np.testing.assert_allclose(ea[:k], eb[:k], atol=1e-10)
    assert abs(np.trace(rho_a) - 1) < 1e-12
