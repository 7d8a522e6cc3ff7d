import warnings

import numpy as np
import pytest

from scramble_lab.errors import DomainError
from scramble_lab.geometry import (
    UnitaryPath, geodesic_length, numerical_metric, path_length, su2_metric, su2_unitary,
    tangent_skewness,
)
from scramble_lab.haar import sample_haar_unitary
from scramble_lab.linalg import PAULI_Z, is_unitary


def test_constant_path_has_zero_length():
    path = UnitaryPath(np.arange(3.0), np.stack([np.eye(2)] * 3))
    assert path_length(path) == 0.0


def test_geodesic_examples():
    assert geodesic_length(PAULI_Z, np.pi) == pytest.approx(np.pi * np.sqrt(2))
    with pytest.raises(DomainError):
        geodesic_length(np.array([[0, 1], [0, 0]]), 1.0)


def test_chord_sum_matches_exact_chords():
    e = np.array([-1.0, 0.3, 2.0])
    steps, t = 40, 2.0
    path = UnitaryPath.from_hamiltonian(np.diag(e), t, steps)
    dt = t / steps
    # ||e^{-iH dt} - I||_F for diagonal H
    chord = np.sqrt(np.sum(4 * np.sin(e * dt / 2) ** 2))
    assert path_length(path) == pytest.approx(steps * chord, rel=1e-12)


def test_discretization_error_is_second_order(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = (a + a.conj().T) / 2
    exact = geodesic_length(h, 1.0)
    errs = [exact - path_length(UnitaryPath.from_hamiltonian(h, 1.0, n)) for n in (40, 80, 160)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.02)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.02)


def test_coarse_path_warns():
    with pytest.warns(RuntimeWarning):
        path_length(UnitaryPath.from_hamiltonian(np.diag([3.0, -3.0]), 1.0, 2))


def test_tangent_skewness_is_second_order():
    h = np.diag([1.0, -0.5])
    s1 = tangent_skewness(UnitaryPath.from_hamiltonian(h, 1.0, 50))
    s2 = tangent_skewness(UnitaryPath.from_hamiltonian(h, 1.0, 100))
    assert s1 / s2 == pytest.approx(4.0, rel=0.05)


def test_bi_invariance(seed):
    h = np.diag([0.4, -1.1, 0.7])
    path = UnitaryPath.from_hamiltonian(h, 1.5, 60)
    v, w = sample_haar_unitary(3, seed.child(0)), sample_haar_unitary(3, seed.child(1))
    base = path_length(path)
    assert path_length(path.left(v)) == pytest.approx(base, rel=1e-12)
    assert path_length(path.right(w)) == pytest.approx(base, rel=1e-12)


def test_su2_chart():
    for args in [(0, 0, 0, 0), (0.3, 1.1, 0.4, -2.0)]:
        u = su2_unitary(*args)
        assert is_unitary(u)
    assert abs(np.linalg.det(su2_unitary(0.0, 0.5, 0.7, 1.2)) - 1) < 1e-12
    np.testing.assert_allclose(su2_unitary(0, 0, 0, 0), np.eye(2))


@pytest.mark.parametrize("gamma", [0.2, 0.7, 1.3])
def test_su2_metric_matches_finite_differences(gamma):
    g = numerical_metric(0.4, gamma, -0.9)
    raw = su2_metric(gamma, normalized=False)
    np.testing.assert_allclose(np.diag(g), [raw.g_bb, raw.g_gg, raw.g_dd], atol=1e-8)
    np.testing.assert_allclose(g - np.diag(np.diag(g)), 0, atol=1e-8)
    unit = su2_metric(gamma)
    assert unit.g_bb + unit.g_dd == pytest.approx(1.0)


def test_gamma_arc_length():
    # moving gamma from 0 to pi/2 traces a quarter great circle of the unit three-sphere
    gammas = np.linspace(0, np.pi / 2, 2001)
    path = UnitaryPath(gammas, np.stack([su2_unitary(0, 0.3, g, 0.1) for g in gammas]))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert path_length(path) / np.sqrt(2) == pytest.approx(np.pi / 2, rel=1e-6)
