import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scramble_lab.errors import DomainError
from scramble_lab.levels import ensemble_spacings, spacing_ks, bulk_spacings, unfold
from scramble_lab.linalg import PAULI_X, PAULI_Z, embed_site, is_hermitian
from scramble_lab.models import (
    build_gue, build_mixed_field_ising, build_syk4, jordan_wigner_annihilators, number_operator,
    reflection_sectors, syk_mean_square_norm,
)


def kron_ising(L, J, hx, hz):
    """Independent construction from explicit Kronecker products."""
    def site(op, i):
        mats = [np.eye(2)] * L
        mats[i] = op
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out
    h = sum(J * site(PAULI_Z, i) @ site(PAULI_Z, i + 1) for i in range(L - 1))
    return h + sum(hx * site(PAULI_X, i) + hz * site(PAULI_Z, i) for i in range(L))


def test_ising_two_site_example():
    e = build_mixed_field_ising(2, J=1, hx=1, hz=0).eigenvalues
    np.testing.assert_allclose(e, [-np.sqrt(5), -1, 1, np.sqrt(5)], atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 6), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_ising_matches_kron_oracle(L, J, hx, hz):
    h = build_mixed_field_ising(L, J, hx, hz).matrix
    assert np.abs(h - kron_ising(L, J, hx, hz)).max() < 1e-12


def test_ising_domain():
    with pytest.raises(DomainError):
        build_mixed_field_ising(1)
    with pytest.raises(DomainError):
        build_mixed_field_ising(13)


def test_reflection_sectors_partition_spectrum():
    model = build_mixed_field_ising(6)
    even, odd = reflection_sectors(model)
    assert even.size + odd.size == 64
    np.testing.assert_allclose(np.sort(np.concatenate([even, odd])), model.eigenvalues, atol=1e-10)


def test_mixed_field_ising_is_goe_within_sectors():
    even, _ = reflection_sectors(build_mixed_field_ising(11))
    s = bulk_spacings(unfold(even), 0.15)
    s = s / s.mean()
    assert spacing_ks(s, beta=1) < 0.06
    assert spacing_ks(s, beta=None) > 0.1


def test_gue_normalization_and_entry_variances(seed):
    d = 48
    mats = np.stack([build_gue(d, seed.child(i)).matrix for i in range(300)])
    assert all(is_hermitian(m) for m in mats[:5])
    tr2 = np.einsum("sij,sji->s", mats, mats).real / d
    assert abs(tr2.mean() - 1) < 5 * tr2.std() / np.sqrt(len(tr2)) + 1e-12
    diag = mats[:, np.arange(d), np.arange(d)].real.ravel()
    off = mats[:, 0, 1:].real.ravel()
    assert diag.var() / off.var() == pytest.approx(2.0, rel=0.1)


def test_jordan_wigner_anticommutation():
    c = [op.toarray() for op in jordan_wigner_annihilators(4)]
    for i in range(4):
        for j in range(4):
            acomm = c[i] @ c[j].conj().T + c[j].conj().T @ c[i]
            np.testing.assert_allclose(acomm, np.eye(16) * (i == j), atol=1e-14)
            np.testing.assert_allclose(c[i] @ c[j] + c[j] @ c[i], 0, atol=1e-14)


def test_syk_hermitian_and_number_conserving(seed):
    model = build_syk4(6, seed=seed)
    h = model.matrix
    assert is_hermitian(h)
    n = number_operator(6)
    assert np.abs(h @ n - n @ h).max() < 1e-12
    # four-body terms annihilate sectors with fewer than two particles
    empty = np.zeros(64)
    empty[0] = 1
    assert np.linalg.norm(h @ empty) < 1e-14


def test_syk_norm_matches_counting_oracle(seed):
    N = 6
    mats = (build_syk4(N, seed=seed.child(i)).matrix for i in range(150))
    vals = np.array([np.sum(np.abs(h) ** 2) / 2**N for h in mats])
    target = syk_mean_square_norm(N)
    assert abs(vals.mean() - target) < 5 * vals.std() / np.sqrt(vals.size)


def test_syk_norm_scales_linearly_in_n():
    # sum over pairs of 2^-|A u B| grows like N^4, so the ratio approaches 1/N^3 * N^4 ~ N
    ratios = [syk_mean_square_norm(N) / N for N in (6, 8, 10)]
    assert max(ratios) / min(ratios) < 1.6


def test_embed_site_order():
    np.testing.assert_allclose(embed_site(PAULI_Z, 0, 2), np.kron(PAULI_Z, np.eye(2)))
