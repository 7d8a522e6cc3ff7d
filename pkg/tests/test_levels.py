import numpy as np
import pytest
from scipy import integrate

from scramble_lab.errors import DomainError
from scramble_lab.levels import (
    bulk_spacings, ensemble_spacings, number_variance, poisson_spacing_pdf, spacing_cdf,
    spacing_ks, spacing_pdf, unfold,
)
from scramble_lab.models import build_gue


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_surmise_normalized_with_unit_mean(beta):
    norm = integrate.quad(lambda s: spacing_pdf(s, beta), 0, np.inf)[0]
    mean = integrate.quad(lambda s: s * spacing_pdf(s, beta), 0, np.inf)[0]
    assert norm == pytest.approx(1, abs=1e-10)
    assert mean == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_surmise_cdf_matches_quadrature(beta):
    for s in (0.3, 1.0, 2.2):
        assert spacing_cdf(s, beta) == pytest.approx(integrate.quad(lambda x: spacing_pdf(x, beta), 0, s)[0])


def test_gue_level_repulsion_constant():
    s = 1e-4
    assert spacing_pdf(s, 2) / s**2 == pytest.approx(32 / np.pi**2, rel=1e-6)
    assert spacing_pdf(s, 1) / s == pytest.approx(np.pi / 2, rel=1e-6)


def test_poisson_density():
    assert poisson_spacing_pdf(0.0) == 1.0
    assert integrate.quad(poisson_spacing_pdf, 0, np.inf)[0] == pytest.approx(1)


def test_unfold_gives_unit_mean_spacing(rng):
    levels = np.cumsum(rng.exponential(size=500)) ** 1.3
    x = unfold(levels)
    assert np.diff(x).mean() == pytest.approx(1.0, abs=1e-12)


def test_unfold_too_few_levels():
    with pytest.raises(DomainError):
        unfold(np.arange(5.0))


def test_rigid_lattice_has_zero_number_variance():
    x = np.arange(400.0)
    for L in (1, 3, 10):
        assert number_variance(x, L) == 0.0


def test_poisson_number_variance_is_linear(rng):
    x = np.cumsum(rng.exponential(size=40000))
    assert number_variance(x, 5.0) == pytest.approx(5.0, rel=0.1)
    assert spacing_ks(bulk_spacings(unfold(x)), beta=None) < 0.02


def test_number_variance_rejects_long_window():
    with pytest.raises(DomainError):
        number_variance(np.arange(40.0), 20)


def test_gue_spacings_follow_surmise(seed):
    spectra = np.stack([build_gue(64, seed.child(i)).eigenvalues for i in range(150)])
    s = ensemble_spacings(spectra)
    assert spacing_ks(s, 2) < 0.03
    assert spacing_ks(s, None) > 0.15
