import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from causalwalk.channels import KrausChannel, reduce_switch, switch_channel_apply, switch_kraus
from causalwalk.errors import ChannelError, DimensionMismatchError

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
PLUS = 0.5 * np.ones((2, 2), dtype=complex)
ZERO = np.diag([1, 0]).astype(complex)


def random_unitary(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_rho(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_identity_channels_leave_state():
    rho = np.array([[0.7, 0.2], [0.2, 0.3]], dtype=complex)
    out = switch_channel_apply(KrausChannel.identity(2), KrausChannel.identity(2), rho, PLUS)
    np.testing.assert_allclose(out, np.kron(rho, PLUS), atol=1e-15)


def test_unitary_branch_order(rng):
    u1, u2 = random_unitary(rng, 3), random_unitary(rng, 3)
    rho = random_rho(rng, 3)
    out = switch_channel_apply(KrausChannel.unitary(u1), KrausChannel.unitary(u2), rho, ZERO)
    expected = np.kron(u2 @ u1 @ rho @ u1.conj().T @ u2.conj().T, ZERO)
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_unitary_branch_matches_controlled_operator(rng):
    u1, u2 = random_unitary(rng, 2), random_unitary(rng, 2)
    rho = random_rho(rng, 2)
    W = np.kron(u2 @ u1, ZERO) + np.kron(u1 @ u2, np.diag([0, 1]))
    joint = np.kron(rho, PLUS)
    out = switch_channel_apply(KrausChannel.unitary(u1), KrausChannel.unitary(u2), rho, PLUS)
    np.testing.assert_allclose(out, W @ joint @ W.conj().T, atol=1e-12)


def test_x_and_z_channels_by_hand():
    p, q = 0.3, 0.6
    phi1 = KrausChannel((np.sqrt(1 - p) * np.eye(2), np.sqrt(p) * X))
    phi2 = KrausChannel((np.sqrt(1 - q) * np.eye(2), np.sqrt(q) * Z))
    rho = np.array([[0.8, 0.1], [0.1, 0.2]], dtype=complex)
    out = switch_channel_apply(phi1, phi2, rho, PLUS)

    # written out element by element on the 4x4 space
    expected = np.zeros((4, 4), dtype=complex)
    k1s = [np.sqrt(1 - p) * np.eye(2), np.sqrt(p) * X]
    k2s = [np.sqrt(1 - q) * np.eye(2), np.sqrt(q) * Z]
    for a in k2s:
        for b in k1s:
            W = np.zeros((4, 4), dtype=complex)
            for i in range(2):
                for j in range(2):
                    W[2 * i, 2 * j] = (a @ b)[i, j]
                    W[2 * i + 1, 2 * j + 1] = (b @ a)[i, j]
            expected += W @ np.kron(rho, PLUS) @ W.conj().T
    np.testing.assert_allclose(out, expected, atol=1e-14)
    coherence = out.reshape(2, 2, 2, 2)[:, 0, :, 1]
    assert np.max(np.abs(coherence)) > 1e-3
    np.testing.assert_allclose(np.trace(reduce_switch(out, 2)), 1.0, atol=1e-12)


def test_incomplete_channel():
    with pytest.raises(ChannelError):
        KrausChannel((0.5 * np.eye(2),))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        switch_kraus(KrausChannel.identity(2), KrausChannel.identity(3))


def test_switch_kraus_complete(rng):
    phi1 = KrausChannel((np.sqrt(0.4) * np.eye(2), np.sqrt(0.6) * X))
    phi2 = KrausChannel.unitary(random_unitary(rng, 2))
    total = sum(w.conj().T @ w for w in switch_kraus(phi1, phi2))
    np.testing.assert_allclose(total, np.eye(4), atol=1e-12)


@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_output_is_density_matrix(p, q, ps, seed):
    rng = np.random.default_rng(seed)
    phi1 = KrausChannel((np.sqrt(1 - p) * np.eye(2), np.sqrt(p) * X))
    phi2 = KrausChannel((np.sqrt(1 - q) * np.eye(2), np.sqrt(q) * Z))
    sw = np.array([[1 - ps, np.sqrt(ps * (1 - ps))], [np.sqrt(ps * (1 - ps)), ps]], dtype=complex)
    out = switch_channel_apply(phi1, phi2, random_rho(rng, 2), sw)
    assert abs(np.trace(out) - 1) < 1e-10
    np.testing.assert_allclose(out, out.conj().T, atol=1e-12)
    assert np.min(np.linalg.eigvalsh(out)) > -1e-10
