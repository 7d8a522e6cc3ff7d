import numpy as np
import pytest

from scramble_lab.chaos import (
    analyze_sff, commutator_cone, front_positions, heisenberg, lyapunov_fit, otoc, otoc_series,
    OtocPoint, scrambling_time, sff, sff_curve, thermal_state,
)
from scramble_lab.errors import DimensionError, DomainError, FitError
from scramble_lab.linalg import PAULI_X, PAULI_Y, PAULI_Z, embed_site, evolve_unitary
from scramble_lab.models import build_gue, build_mixed_field_ising


def test_sff_at_zero_time_is_partition_function_squared():
    e = np.array([0.0, 1.0, 3.0])
    z = np.exp(-0.5 * e).sum()
    assert sff(e, 0.5, 0.0) == pytest.approx(z**2)
    assert sff(e, 0.0, 0.0) == pytest.approx(9.0)


def test_sff_single_level_is_constant():
    np.testing.assert_allclose(sff([2.0], 0.0, np.linspace(0, 10, 5)), 1.0)


def test_sff_matches_trace_of_propagator(seed):
    model = build_gue(16, seed)
    for t in (0.3, 2.0, 11.0):
        u = evolve_unitary(model.matrix, t)
        assert sff(model.eigenvalues, 0.0, t) == pytest.approx(abs(np.trace(u)) ** 2, rel=1e-9)


def test_sff_long_time_average_is_dimension(seed, rng):
    e = build_gue(32, seed).eigenvalues
    t = rng.uniform(1e3, 1e5, size=20000)
    assert sff(e, 0.0, t).mean() == pytest.approx(32, rel=0.05)


def test_gue_sff_has_dip_ramp_plateau(seed):
    d = 64
    times = np.logspace(-1, 3, 160)
    curve = sff_curve(lambda s: build_gue(d, s), times, 0.0, 150, seed)
    res = analyze_sff(curve, late_time=200)
    assert res.has_dip and res.has_ramp
    assert res.plateau == pytest.approx(d, rel=0.1)


def test_poisson_control_has_no_ramp(seed):
    d = 64
    times = np.logspace(-1, 3, 160)
    curve = sff_curve(lambda s: np.sort(s.generator().normal(size=d)), times, 0.0, 150, seed)
    assert not analyze_sff(curve, late_time=200).has_ramp


def test_sff_rejects_unsorted_times(seed):
    with pytest.raises(DomainError):
        sff_curve(lambda s: build_gue(4, s), [1.0, 0.5], 0.0, 2, seed)


def test_heisenberg_preserves_spectrum(seed):
    u = evolve_unitary(build_gue(8, seed).matrix, 1.3)
    w = np.diag(np.arange(8.0))
    np.testing.assert_allclose(np.linalg.eigvalsh(heisenberg(w, u)), np.arange(8.0), atol=1e-10)
    with pytest.raises(DimensionError):
        heisenberg(np.eye(2), np.eye(3))


def test_otoc_at_time_zero():
    model = build_mixed_field_ising(3)
    x0, x2, z0 = (embed_site(op, s, 3) for op, s in ((PAULI_X, 0), (PAULI_X, 2), (PAULI_Z, 0)))
    p = otoc(x0, x2, model, 0.0)
    assert p.F == pytest.approx(1) and p.C == pytest.approx(0, abs=1e-14)
    q = otoc(x0, z0, model, 0.0)
    assert q.F.real == pytest.approx(-1) and q.C == pytest.approx(4)


def test_otoc_identity_along_evolution():
    model = build_mixed_field_ising(4)
    w, v = embed_site(PAULI_Z, 0, 4), embed_site(PAULI_Y, 3, 4)
    for beta in (0.0, 0.7):
        for p in otoc_series(w, v, model, np.linspace(0, 4, 9), beta):
            assert p.identity_checked
            assert abs(p.C - 2 * (1 - p.F.real)) < 1e-9


def test_otoc_non_unitary_probe_not_checked():
    model = build_mixed_field_ising(2)
    proj = np.diag([1.0, 0, 0, 0])
    assert not otoc(proj, embed_site(PAULI_X, 1, 2), model, 0.5).identity_checked


def test_thermal_state():
    model = build_mixed_field_ising(3)
    assert thermal_state(model, 0.0) is None
    rho = thermal_state(model, 1.0)
    assert np.trace(rho).real == pytest.approx(1)
    cold = thermal_state(model, 200.0)
    ground = model.eigen.eigenvectors[:, 0]
    assert np.real(ground.conj() @ cold @ ground) == pytest.approx(1, abs=1e-8)


def test_light_cone_locality():
    L = 8
    model = build_mixed_field_ising(L)
    ops = [embed_site(PAULI_Z, i, L) for i in range(L)]
    cone = commutator_cone(model, ops, [0.0, 0.4, 3.0])
    assert np.all(cone[0, 1:] < 1e-12)
    # at short times the norm falls off with distance like t^d / d!
    assert np.all(np.diff(cone[1, 1:]) < 0)
    assert cone[1, -1] < 1e-3
    fronts = front_positions(cone)
    assert fronts[0] == 0 and fronts[-1] >= fronts[1]


def test_lyapunov_recovers_synthetic_rate():
    t = np.linspace(0, 5, 40)
    pts = [OtocPoint(x, 1 - 0.5 * c, c) for x, c in zip(t, 1e-4 * np.exp(2 * 0.7 * t))]
    fit = lyapunov_fit(pts, temperature=1.0)
    assert fit.lambda_l == pytest.approx(0.7, rel=1e-9)
    assert fit.bound_ratio == pytest.approx(0.7 / (2 * np.pi))
    assert not fit.exceeds_bound


def test_lyapunov_failures():
    flat = [OtocPoint(t, 1, 0.01) for t in np.linspace(0, 1, 10)]
    with pytest.raises(FitError):
        lyapunov_fit(flat)
    few = [OtocPoint(t, 1, 0.01 * (1 + t)) for t in (0, 1)]
    with pytest.raises(FitError) as info:
        lyapunov_fit(few)
    assert info.value.diagnostics["in_window"] == 2


def test_scrambling_time():
    assert scrambling_time(0.5, 100) == pytest.approx(np.log(100) / 0.5)
    with pytest.raises(DomainError):
        scrambling_time(0.0, 10)
