import numpy as np
import pytest

from timeflip import channels, qmat
from timeflip.channels import (
    ChannelValidationError,
    adjoint_inversion,
    channel_from_json,
    channel_of_choi,
    channel_to_json,
    choi_distance,
    choi_of_channel,
    dephasing_y,
    depolarising,
    depolarising_kraus_general,
    identity_channel,
    is_transposition_invariant,
    kraus_channel,
    load_channel,
    projection_channel,
    random_bistochastic,
    random_transposition_invariant,
    save_channel,
    transpose_channel,
    unitary_channel,
)
from timeflip.qmat import PAULI_X, PAULI_Y, identity, ket, projector, tensor


def random_states(d, n, seed):
    rng = np.random.default_rng(seed)
    return [qmat.random_density_matrix(d, rng) for _ in range(n)]


def test_apply_identity():
    ch = identity_channel(3)
    rho = random_states(3, 1, 0)[0]
    assert np.array_equal(ch.apply(rho), rho)


def test_apply_depolarising_full():
    ch = depolarising(1.0, 2)
    out = ch.apply(projector(ket(0, 2)))
    assert np.max(np.abs(out - identity(2) / 2)) < 1e-12


def test_apply_dephasing_half_on_plus():
    # (|+><+| + Y|+><+|Y)/2 = I/2, since Y maps |+> to |-> up to phase
    out = dephasing_y(0.5).apply(projector(qmat.KET_PLUS))
    assert np.max(np.abs(out - identity(2) / 2)) < 1e-12


def test_apply_dim_mismatch():
    with pytest.raises(ValueError):
        identity_channel(2).apply(identity(3) / 3)


def test_kraus_validation_rejects_incomplete():
    with pytest.raises(ChannelValidationError, match="trace preservation"):
        kraus_channel([0.5 * identity(2)])


def test_apply_preserves_trace_and_positivity():
    rng = np.random.default_rng(7)
    for _ in range(10):
        d = int(rng.integers(2, 5))
        ch = random_bistochastic(d, int(rng.integers(1, 4)), int(rng.integers(0, 1000)))
        rho = qmat.random_density_matrix(d, rng)
        out = ch.apply(rho)
        assert abs(np.trace(out) - 1.0) < 1e-12
        assert np.linalg.eigvalsh(out)[0] > -1e-12


# --- Choi calculus ----------------------------------------------------------

def test_choi_identity():
    choi = choi_of_channel(identity_channel(2))
    lam = np.linalg.eigvalsh(choi.op)
    assert abs(np.trace(choi.op) - 2.0) < 1e-12
    assert np.sum(lam > 1e-10) == 1  # rank 1
    bell = qmat.max_entangled_ket(2, normalised=False)
    assert np.max(np.abs(choi.op - np.outer(bell, bell.conj()))) < 1e-12


def test_choi_depolarising_spectrum():
    # Choi = (q/2) I_4 + (1-q)|I>><<I| gives eigenvalues {q/2 x3, 2 - 3q/2}
    q = 0.5
    lam = np.linalg.eigvalsh(choi_of_channel(depolarising(q, 2)).op)
    assert np.allclose(sorted(lam), [q / 2, q / 2, q / 2, 2 - 1.5 * q], atol=1e-12)


def test_choi_round_trip_random():
    rng = np.random.default_rng(8)
    for _ in range(50):
        d = int(rng.integers(2, 4))
        ch = random_bistochastic(d, int(rng.integers(1, 4)), int(rng.integers(0, 10**6)))
        back = channel_of_choi(choi_of_channel(ch))
        for rho in random_states(d, 3, int(rng.integers(0, 10**6))):
            assert np.max(np.abs(ch.apply(rho) - back.apply(rho))) < 1e-9


def test_channel_of_choi_rejects_bad_input():
    bad = channels.ChoiMatrix(-identity(4), 2, 2)
    with pytest.raises(ChannelValidationError):
        channel_of_choi(bad)
    not_tp = channels.ChoiMatrix(np.diag([2.0, 0, 0, 0]).astype(complex), 2, 2)
    with pytest.raises(ChannelValidationError):
        channel_of_choi(not_tp)


# --- Inversions -------------------------------------------------------------

def test_transpose_symmetric_and_antisymmetric_unitaries():
    for u in (PAULI_X, PAULI_Y):
        ch = unitary_channel(u)
        assert choi_distance(transpose_channel(ch), ch) < 1e-12


def test_transpose_choi_swap_identity():
    s = qmat.swap_operator(3)
    for seed in range(5):
        ch = random_bistochastic(3, 2, seed)
        lhs = choi_of_channel(transpose_channel(ch)).op
        rhs = s @ choi_of_channel(ch).op @ s
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_transpose_involution_exact():
    ch = random_bistochastic(2, 3, 11)
    double = transpose_channel(transpose_channel(ch))
    for a, b in zip(double.kraus, ch.kraus):
        assert np.array_equal(a, b)


def test_transpose_fixes_invariant_families():
    for ch in (depolarising(0.3, 2), dephasing_y(0.6), projection_channel(0.7, 0, 2, 3)):
        assert choi_distance(transpose_channel(ch), ch) < 1e-10
        assert is_transposition_invariant(ch)


def test_bistochastic_symmetric_under_transpose():
    for seed in range(5):
        ch = random_bistochastic(2, 2, seed)
        assert ch.is_bistochastic() == transpose_channel(ch).is_bistochastic()


def test_transpose_requires_square():
    app = channels.append_state_channel(2, identity(2) / 2)
    with pytest.raises(ChannelValidationError):
        transpose_channel(app)


def test_adjoint_inversion():
    rng = np.random.default_rng(12)
    u = qmat.random_unitary(3, rng)
    inv = adjoint_inversion(unitary_channel(u))
    assert choi_distance(inv, unitary_channel(u.conj().T)) < 1e-12
    # Pauli channels are fixed points (Hermitian Kraus operators)
    assert choi_distance(adjoint_inversion(depolarising(0.4, 2)), depolarising(0.4, 2)) < 1e-12
    mix = random_bistochastic(2, 3, 13)
    assert adjoint_inversion(mix).is_bistochastic()


def test_adjoint_inversion_rejects_non_bistochastic():
    damp = kraus_channel([
        np.array([[1, 0], [0, np.sqrt(0.5)]], dtype=complex),
        np.array([[0, np.sqrt(0.5)], [0, 0]], dtype=complex),
    ])
    with pytest.raises(ChannelValidationError):
        adjoint_inversion(damp)


# --- Named families ---------------------------------------------------------

def test_depolarising_limits():
    assert choi_distance(depolarising(0.0, 2), identity_channel(2)) < 1e-12
    full = depolarising(1.0, 2)
    for rho in random_states(2, 5, 14):
        assert np.max(np.abs(full.apply(rho) - identity(2) / 2)) < 1e-12
    with pytest.raises(ValueError):
        depolarising(1.2, 2)
    with pytest.raises(ValueError):
        depolarising(0.5, 1)


def test_depolarising_dual_construction():
    # Pauli form vs the explicit general-d Kraus list define the same channel
    for q in (0.25, 0.5, 0.9):
        assert choi_distance(depolarising(q, 2), depolarising_kraus_general(q, 2)) < 1e-9


def test_depolarising_general_d_action():
    rng = np.random.default_rng(15)
    for d in (3, 4):
        for q in (0.3, 1.0):
            ch = depolarising(q, d)
            lit = depolarising_kraus_general(q, d)
            assert ch.is_bistochastic() and lit.is_bistochastic()
            assert choi_distance(ch, lit) < 1e-9
            rho = qmat.random_density_matrix(d, rng)
            expected = q * identity(d) / d + (1 - q) * rho
            assert np.max(np.abs(ch.apply(rho) - expected)) < 1e-9


def test_dephasing_y():
    assert choi_distance(dephasing_y(0.0), identity_channel(2)) < 1e-12
    assert choi_distance(dephasing_y(1.0), unitary_channel(PAULI_Y)) < 1e-12
    # eigenstates of Y pass through unchanged at any p: a classical bit fits
    lam, vec = np.linalg.eigh(PAULI_Y)
    for k in range(2):
        state = projector(vec[:, k])
        out = dephasing_y(0.5).apply(state)
        assert np.max(np.abs(out - state)) < 1e-12
    with pytest.raises(ValueError):
        dephasing_y(-0.2)


def test_projection_channel_extreme_angle():
    p0, p1, _ = channels.projection_kraus(np.pi / 2, 0, 2, 3)
    assert np.max(np.abs(p0 - projector(ket(0, 3)))) < 1e-12
    assert np.max(np.abs(p1 - projector(ket(2, 3)))) < 1e-12


def test_projection_channel_cptp_random():
    rng = np.random.default_rng(16)
    for _ in range(100):
        d = int(rng.integers(2, 5))
        m = int(rng.integers(0, d))
        n = (m + 1 + int(rng.integers(0, d - 1))) % d
        ch = projection_channel(rng.uniform(0, np.pi), m, n, d)  # validates CPTP
        assert ch.is_bistochastic()
        for k in ch.kraus:
            assert np.max(np.abs(k - k.T)) < 1e-12


def test_projection_channel_rejects_bad_indices():
    with pytest.raises(ValueError):
        projection_channel(0.3, 1, 1, 3)
    with pytest.raises(ValueError):
        projection_channel(0.3, 0, 3, 3)


def test_random_bistochastic():
    single = random_bistochastic(2, 1, 42)
    assert len(single.kraus) == 1  # a unitary channel
    lam = np.linalg.eigvalsh(choi_of_channel(single).op)
    assert np.sum(lam > 1e-10) == 1
    ch = random_bistochastic(3, 4, 42)
    assert ch.is_bistochastic()
    again = random_bistochastic(3, 4, 42)
    assert choi_distance(ch, again) == 0.0
    with pytest.raises(ValueError):
        random_bistochastic(2, 0, 1)


def test_random_transposition_invariant():
    for seed in range(5):
        ch = random_transposition_invariant(2, 3, seed)
        assert ch.is_bistochastic()
        assert is_transposition_invariant(ch)
    ch4 = random_transposition_invariant(4, 4, 9)
    assert is_transposition_invariant(ch4)
    ch3 = random_transposition_invariant(3, 3, 9)  # odd d: symmetric-only mixture
    assert is_transposition_invariant(ch3)


# --- Helper channels --------------------------------------------------------

def test_tensor_trace_append_constant():
    rng = np.random.default_rng(17)
    rho = qmat.random_density_matrix(2, rng)
    sigma = qmat.random_density_matrix(3, rng)
    both = channels.tensor_channel(identity_channel(2), identity_channel(3))
    assert np.max(np.abs(both.apply(tensor(rho, sigma)) - tensor(rho, sigma))) < 1e-12
    tr = channels.trace_out_channel((2, 3), keep=0)
    assert np.max(np.abs(tr.apply(tensor(rho, sigma)) - rho)) < 1e-12
    tr1 = channels.trace_out_channel((2, 3), keep=1)
    assert np.max(np.abs(tr1.apply(tensor(rho, sigma)) - sigma)) < 1e-12
    app = channels.append_state_channel(2, sigma)
    assert np.max(np.abs(app.apply(rho) - tensor(rho, sigma))) < 1e-12
    const = channels.constant_channel(sigma, 2)
    assert np.max(np.abs(const.apply(rho) - sigma)) < 1e-12


# --- JSON files -------------------------------------------------------------

def test_channel_json_round_trip(tmp_path):
    ch = dephasing_y(0.35)
    path = tmp_path / "chan.json"
    save_channel(ch, path)
    back = load_channel(path)
    assert choi_distance(ch, back) < 1e-12


def test_channel_json_reports_violated_invariant():
    doc = channel_to_json(dephasing_y(0.2))
    doc["kraus"] = doc["kraus"][:1]  # break completeness
    with pytest.raises(ChannelValidationError, match="trace preservation"):
        channel_from_json(doc)
    with pytest.raises(ChannelValidationError):
        channel_from_json({"dim": 2})
