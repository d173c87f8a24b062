import numpy as np
import pytest

from timeflip import qmat
from timeflip.channels import (
    constant_channel,
    dephasing_y,
    dephasing_z,
    depolarising,
    identity_channel,
    projection_channel,
    projection_kraus,
    trace_out_channel,
    uniform_projection_channel,
)
from timeflip.flip import flipped_channel
from timeflip.nogo import fixed_output_check, side_channel_scan, sym_chan_flip_identity
from timeflip.qmat import KET_PLUS, PAULI_X, PAULI_Y, PAULI_Z, identity, projector


def random_projection_params(rng):
    d = int(rng.integers(2, 5))
    m = int(rng.integers(0, d))
    n = int(rng.integers(0, d - 1))
    return (rng.uniform(0, np.pi), m, n if n != m else d - 1, d)


# --- symmetric channels and the flip ------------------------------------------

def test_sym_chan_flip_identity_projection_channels():
    rng = np.random.default_rng(50)
    for _ in range(50):
        theta, m, n, d = random_projection_params(rng)
        omega = qmat.random_density_matrix(2, rng)
        dist = sym_chan_flip_identity(projection_channel(theta, m, n, d), omega)
        assert dist <= 1e-9


def test_sym_chan_flip_identity_z_dephasing():
    omega = qmat.random_density_matrix(2, np.random.default_rng(51))
    assert sym_chan_flip_identity(dephasing_z(0.3), omega) <= 1e-9


def test_sym_chan_flip_identity_negative_control():
    # Y is antisymmetric, so Y-dephasing is visibly affected by the flip
    omega = projector(KET_PLUS)
    dist = sym_chan_flip_identity(dephasing_y(0.4), omega, require_symmetric=False)
    assert dist > 1e-3
    with pytest.raises(ValueError):
        sym_chan_flip_identity(dephasing_y(0.4), omega)


# --- projection-channel facts used by the lemma --------------------------------

def test_projection_channels_unital():
    rng = np.random.default_rng(52)
    for _ in range(20):
        theta, m, n, d = random_projection_params(rng)
        ch = projection_channel(theta, m, n, d)
        assert np.max(np.abs(ch.apply(identity(d) / d) - identity(d) / d)) <= 1e-12


def test_projection_bloch_contraction_coefficients():
    # the pinching maps the in-plane Bloch components (r1, r3) of the m-n
    # sector to (r1/2 + (r1 cos2t + r3 sin2t)/2, r3/2 + (r1 sin2t - r3 cos2t)/2)
    # and kills r2
    rng = np.random.default_rng(53)
    for _ in range(10):
        theta = rng.uniform(0, np.pi)
        r1, r3 = rng.uniform(-0.6, 0.6, 2)
        r2 = rng.uniform(-0.3, 0.3)
        rho = 0.5 * (identity(2) + r1 * PAULI_X + r2 * PAULI_Y + r3 * PAULI_Z)
        p0, p1, _ = projection_kraus(theta, 0, 1, 2)
        out = p0 @ rho @ p0 + p1 @ rho @ p1
        c, s = np.cos(2 * theta), np.sin(2 * theta)
        x_coeff = 0.5 * r1 + 0.5 * (r1 * c + r3 * s)
        z_coeff = 0.5 * r3 + 0.5 * (r1 * s - r3 * c)
        expected = 0.5 * (identity(2) + x_coeff * PAULI_X + z_coeff * PAULI_Z)
        assert np.max(np.abs(out - expected)) < 1e-12


def test_projection_theta_zero_kills_z_component():
    # at theta = 0 the oscillating term cancels the persistent r3/2 exactly
    rho = 0.5 * (identity(2) + 0.8 * PAULI_Z)
    out = projection_channel(0.0, 0, 1, 2).apply(rho)
    assert np.max(np.abs(out - identity(2) / 2)) < 1e-12


def test_uniform_projection_channel_is_complete_dephasing():
    rng = np.random.default_rng(54)
    for d in (2, 3, 4):
        rho = qmat.random_density_matrix(d, rng)
        out = uniform_projection_channel(d).apply(rho)
        assert np.max(np.abs(out - np.diag(np.diag(rho)))) < 1e-12


# --- fixed-output lemma ---------------------------------------------------------

def test_fixed_output_constant_decoder():
    rng = np.random.default_rng(55)
    d = 3
    sigma = qmat.random_density_matrix(2, rng)
    report = fixed_output_check(constant_channel(sigma, d),
                                qmat.random_density_matrix(d, rng), d)
    assert report.max_derivative_norm <= 1e-6
    assert report.fixed_output_distance <= 1e-8
    assert report.verdict == "pass"


def test_fixed_output_identity_decoder_detects_dependence():
    report = fixed_output_check(identity_channel(2), projector(KET_PLUS), 2)
    assert report.max_derivative_norm > 1e-3
    assert report.verdict == "pass"  # hypothesis not met, nothing violated


def test_fixed_output_identity_decoder_maximally_mixed():
    d = 3
    report = fixed_output_check(identity_channel(d), identity(d) / d, d)
    assert report.max_derivative_norm <= 1e-6
    assert report.fixed_output_distance <= 1e-8
    assert report.verdict == "pass"


def test_fixed_output_dimension_mismatch():
    with pytest.raises(ValueError):
        fixed_output_check(identity_channel(2), identity(3) / 3, 3)


# --- side-channel scan -----------------------------------------------------------

def test_scan_trivial_constant_supermap():
    sigma = qmat.random_density_matrix(2, np.random.default_rng(56))
    report = side_channel_scan(lambda ch: constant_channel(sigma, 2),
                               samples=8, seed=1)
    assert report.verdict == "pass"


def test_scan_identity_supermap_no_verdict():
    report = side_channel_scan(lambda ch: ch, samples=8, seed=2)
    assert report.verdict == "no-verdict"
    assert report.max_derivative_norm > 1e-3  # outputs genuinely differ


def test_scan_flip_based_constant_supermap():
    omega = projector(KET_PLUS)

    def supermap(ch):
        post = trace_out_channel((ch.dim_in, 2), keep=0).then(depolarising(1.0, ch.dim_in))
        return flipped_channel(ch, omega).then(post)

    report = side_channel_scan(supermap, samples=10, seed=3)
    assert report.verdict == "pass"
    assert report.max_derivative_norm <= 1e-8
    assert report.fixed_output_distance <= 1e-8


def test_scan_constant_but_informative_supermap_fails():
    # a harness self-test: a supermap that ignores its input channel but
    # still transmits would violate the theorem, and must be flagged
    report = side_channel_scan(lambda ch: depolarising(0.3, 2), samples=6, seed=4)
    assert report.verdict == "fail"


def test_report_serialisable():
    sigma = qmat.random_density_matrix(2, np.random.default_rng(57))
    report = side_channel_scan(lambda ch: constant_channel(sigma, 2), samples=4, seed=5)
    doc = report.to_dict()
    assert set(doc) == {"channel_family", "max_derivative_norm",
                        "fixed_output_distance", "verdict"}
