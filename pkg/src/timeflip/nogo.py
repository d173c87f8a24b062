"""Numerical harness for the no-side-channel property of the flip model.

The communication model must not let the sender and receiver communicate
independently of the channel the provider installed. The argument has two
constructive pieces, both checked here on sampled instances:

* channels with an all-symmetric Kraus list pass through the flip untouched
  (the flip merely appends the control state), and
* any decoder whose composite output is constant across the projection-
  channel family necessarily outputs the value it assigns to the maximally
  mixed state, so a supermap that is constant over all bistochastic inputs
  ends in a constant (zero-capacity) channel.

This is numerical evidence on sampled instances of a universally quantified
statement, not a proof.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import qmat
from .channels import (
    KrausChannel,
    append_state_channel,
    choi_distance,
    projection_channel,
    random_bistochastic,
    uniform_projection_channel,
)
from .flip import flipped_channel
from .qmat import identity, ket

# Central-difference step for the theta derivatives; the dependence is
# trigonometric, so truncation error is ~ step^2 ~ 1e-8.
DERIV_STEP = 1e-4
DERIV_TOL = 1e-6
FIXED_OUTPUT_TOL = 1e-8
CONSTANT_TOL = 1e-8
SYM_TOL = 1e-9


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of one harness run.

    verdict is "pass" when the checked implication holds at the stated
    tolerances, "fail" when it is violated, and "no-verdict" when the
    hypothesis was not met (nothing to conclude).
    """

    channel_family: str
    max_derivative_norm: float
    fixed_output_distance: float
    verdict: str

    def to_dict(self) -> dict:
        return asdict(self)


def _op_norm(m) -> float:
    return float(np.linalg.norm(np.asarray(m), ord=2))


def sym_chan_flip_identity(ch: KrausChannel, omega,
                           require_symmetric: bool = True) -> float:
    """Choi distance between the flipped channel and plain ch-then-append-omega.

    Zero (within tolerance) exactly when every Kraus operator is symmetric;
    pass require_symmetric=False to evaluate the distance for channels that
    intentionally violate the hypothesis.
    """
    if require_symmetric:
        for k in ch.kraus:
            if _op_norm(k - k.T) > SYM_TOL:
                raise ValueError("channel has a non-symmetric Kraus operator")
    untouched = ch.then(append_state_channel(ch.dim_out, omega))
    return choi_distance(flipped_channel(ch, omega), untouched)


def fixed_output_check(decode: KrausChannel, rho, d: int,
                       theta_grid=None,
                       step: float = DERIV_STEP,
                       deriv_tol: float = DERIV_TOL,
                       dist_tol: float = FIXED_OUTPUT_TOL,
                       description: str = "projection channels") -> LemmaReport:
    """Check the fixed-output lemma on one decoder and input state.

    Estimates d/dtheta of decode(C_theta_mn(rho)) for every pair m < n by
    central differences; if all derivatives vanish, the decoder's output on
    the uniform projection channel must equal its output on I/d.
    """
    state = qmat.check_density_matrix(rho)
    if state.shape[0] != d or decode.dim_in != d:
        raise ValueError("decoder and state must act on dimension d")
    if theta_grid is None:
        theta_grid = np.linspace(0.0, np.pi, 9)
    max_deriv = 0.0
    for m in range(d):
        for n in range(m + 1, d):
            for theta in theta_grid:
                hi = decode.apply(projection_channel(theta + step, m, n, d).apply(state))
                lo = decode.apply(projection_channel(theta - step, m, n, d).apply(state))
                max_deriv = max(max_deriv, _op_norm((hi - lo) / (2.0 * step)))
    dephased = uniform_projection_channel(d).apply(state)
    distance = _op_norm(decode.apply(dephased) - decode.apply(identity(d) / d))
    if max_deriv <= deriv_tol:
        verdict = "pass" if distance <= dist_tol else "fail"
    else:
        verdict = "pass"  # hypothesis not met; the implication holds vacuously
    return LemmaReport(description, max_deriv, distance, verdict)


def _spanning_states(d: int) -> list[np.ndarray]:
    # density matrices spanning the Hermitian operators on C^d
    states = [qmat.projector(ket(i, d)) for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            plus = (ket(i, d) + ket(j, d)) / np.sqrt(2)
            imag = (ket(i, d) + 1j * ket(j, d)) / np.sqrt(2)
            states.append(qmat.projector(plus))
            states.append(qmat.projector(imag))
    return states


def side_channel_scan(supermap_output, samples: int = 20, seed: int = 0xF11F,
                      d: int = 2, tol: float = CONSTANT_TOL) -> LemmaReport:
    """Probe a supermap for side channels on random bistochastic inputs.

    If the output channel is the same for every sampled input (pairwise Choi
    distance within tolerance), the common output must be a constant channel
    for the no-side-channel property to hold; the verdict is then "pass"
    (zero capacity confirmed) or "fail". A varying output means the
    constancy hypothesis is not met and the scan returns "no-verdict".
    """
    seeds = np.random.SeedSequence(seed).generate_state(samples)
    rng = np.random.default_rng(seed)
    outputs = []
    for s in seeds:
        r = int(rng.integers(1, 4))
        outputs.append(supermap_output(random_bistochastic(d, r, int(s))))
    variation = 0.0
    for i in range(len(outputs)):
        for j in range(i + 1, len(outputs)):
            variation = max(variation, choi_distance(outputs[i], outputs[j]))
    common = outputs[0]
    reference = common.apply(identity(common.dim_in) / common.dim_in)
    input_dependence = max(
        _op_norm(common.apply(s) - reference) for s in _spanning_states(common.dim_in))
    if variation > tol:
        verdict = "no-verdict"
    elif input_dependence <= tol:
        verdict = "pass"
    else:
        verdict = "fail"
    return LemmaReport("random bistochastic inputs", variation, input_dependence, verdict)
