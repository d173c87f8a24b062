import numpy as np
import pytest

from timeflip import qmat
from timeflip.qmat import (
    PAULI_X,
    PAULI_Z,
    binary_entropy,
    check_density_matrix,
    eigvals_hermitian,
    fidelity,
    identity,
    ket,
    partial_trace,
    projector,
    tensor,
    von_neumann_entropy,
)

# H(1/4) = 0.5 + 0.75*log2(4/3), evaluated independently of the code under test
H_QUARTER = 0.8112781244591328


def bell_state():
    v = (tensor(ket(0, 2).reshape(2, 1), ket(0, 2).reshape(2, 1))
         + tensor(ket(1, 2).reshape(2, 1), ket(1, 2).reshape(2, 1))).reshape(4)
    return projector(v / np.sqrt(2))


def test_tensor_identity():
    assert np.array_equal(tensor(identity(2), identity(2)), identity(4))


def test_tensor_block_layout():
    # control (second factor) varies fastest: X (x) |0><0| hits (0,2) and (2,0)
    m = tensor(PAULI_X, projector(ket(0, 2)))
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 2] = 1.0
    expected[2, 0] = 1.0
    assert np.array_equal(m, expected)


def test_tensor_zz_fixes_bell_state():
    # brute-force 4x4 check: Z(x)Z |phi+><phi+| Z(x)Z = |phi+><phi+|
    phi = bell_state()
    zz = tensor(PAULI_Z, PAULI_Z)
    assert np.max(np.abs(zz @ phi @ zz.conj().T - phi)) < 1e-15
    # eigencheck: the Bell ket is a +1 eigenvector of Z(x)Z
    v = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    assert np.max(np.abs(zz @ v - v)) < 1e-15


def test_tensor_associative():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    b = np.array([[0, 1j], [-1j, 2]], dtype=complex)
    c = np.array([[5, 0], [1, 1]], dtype=complex)
    assert np.array_equal(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))
    rng = np.random.default_rng(0)
    x, y, z = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
    assert np.max(np.abs(tensor(tensor(x, y), z) - tensor(x, tensor(y, z)))) < 1e-12


def test_partial_trace_product_state():
    rng = np.random.default_rng(1)
    rho = qmat.random_density_matrix(2, rng)
    sigma = 0.7 * qmat.random_density_matrix(3, rng)  # trace 0.7 on purpose
    joint = tensor(rho, sigma)
    assert np.max(np.abs(partial_trace(joint, (2, 3), keep=0) - 0.7 * rho)) < 1e-12
    assert np.max(np.abs(partial_trace(joint, (2, 3), keep=1) - sigma)) < 1e-12


def test_partial_trace_bell_marginals():
    phi = bell_state()
    for keep in (0, 1):
        assert np.max(np.abs(partial_trace(phi, (2, 2), keep) - identity(2) / 2)) < 1e-15


def test_partial_trace_flipped_depolarising_marginal():
    # fully depolarising channel, maximally coherent control, input I/2:
    # the target marginal of the joint output stays I/2
    from timeflip.channels import depolarising
    from timeflip.flip import flipped_channel

    out = flipped_channel(depolarising(1.0, 2), projector(qmat.KET_PLUS)).apply(identity(2) / 2)
    target = partial_trace(out, (2, 2), keep=0)
    assert np.max(np.abs(target - identity(2) / 2)) < 1e-12


def test_partial_trace_preserves_trace_and_checks_dims():
    rng = np.random.default_rng(2)
    joint = qmat.random_density_matrix(6, rng)
    red = partial_trace(joint, (2, 3), keep=0)
    assert abs(np.trace(red) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        partial_trace(joint, (2, 2), keep=0)
    with pytest.raises(ValueError):
        partial_trace(joint, (2, 3), keep=2)


def test_eigvals_simple():
    assert np.allclose(eigvals_hermitian(PAULI_Z), [-1.0, 1.0])
    assert np.allclose(eigvals_hermitian(identity(2) / 2), [0.5, 0.5])


def test_eigvals_choi_fully_depolarising():
    # Choi of the fully depolarising qubit channel is I_4 / 2 by direct
    # evaluation of (C (x) Id)(|I>><<I|), so the spectrum is flat at 1/2
    from timeflip.channels import choi_of_channel, depolarising

    choi = choi_of_channel(depolarising(1.0, 2)).op
    assert np.max(np.abs(choi - identity(4) / 2)) < 1e-12
    assert np.allclose(eigvals_hermitian(choi), [0.5] * 4)


def test_eigvals_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eigvals_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_eigvals_unitary_invariance():
    rng = np.random.default_rng(3)
    for _ in range(10):
        d = int(rng.integers(2, 6))
        h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = h + h.conj().T
        u = qmat.random_unitary(d, rng)
        before = eigvals_hermitian(h)
        after = eigvals_hermitian(u @ h @ u.conj().T)
        assert np.max(np.abs(before - after)) < 1e-10


def test_entropy_values():
    assert von_neumann_entropy(projector(ket(0, 2))) == 0.0
    assert abs(von_neumann_entropy(identity(2) / 2) - 1.0) < 1e-15
    assert abs(von_neumann_entropy(np.diag([0.75, 0.25])) - H_QUARTER) < 1e-12


def test_entropy_range_and_purity():
    rng = np.random.default_rng(4)
    for _ in range(20):
        d = int(rng.integers(2, 7))
        rho = qmat.random_density_matrix(d, rng)
        h = von_neumann_entropy(rho)
        assert -1e-12 <= h <= np.log2(d) + 1e-12
        pure = projector(qmat.random_pure_state(d, rng))
        assert von_neumann_entropy(pure) < 1e-9
        assert abs(qmat.purity(pure) - 1.0) < 1e-12


def test_entropy_rejects_invalid():
    with pytest.raises(qmat.StateValidationError):
        von_neumann_entropy(np.diag([0.9, 0.9]))
    with pytest.raises(qmat.StateValidationError):
        von_neumann_entropy(np.array([[0.5, 0.9], [0.9, 0.5]], dtype=complex))


def test_binary_entropy():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert abs(binary_entropy(0.5) - 1.0) < 1e-15
    assert abs(binary_entropy(0.25) - H_QUARTER) < 1e-12
    with pytest.raises(ValueError):
        binary_entropy(1.5)
    with pytest.raises(ValueError):
        binary_entropy(-0.1)


def test_fidelity():
    rng = np.random.default_rng(5)
    rho = qmat.random_density_matrix(3, rng)
    assert abs(fidelity(rho, rho) - 1.0) < 1e-10
    assert fidelity(projector(ket(0, 2)), projector(ket(1, 2))) < 1e-12
    plus = projector(qmat.KET_PLUS)
    assert abs(fidelity(plus, projector(ket(0, 2))) - 0.5) < 1e-12


def test_density_matrix_validation():
    assert check_density_matrix(identity(2) / 2) is not None
    with pytest.raises(qmat.StateValidationError):
        check_density_matrix(np.diag([1.5, -0.5]))


def test_complex_json_round_trip():
    rng = np.random.default_rng(6)
    m = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    data = qmat.complex_matrix_to_json(m)
    back = qmat.complex_matrix_from_json(data, (3, 2))
    assert np.array_equal(m, back)
    with pytest.raises(ValueError):
        qmat.complex_matrix_from_json(data, (2, 2))
