"""The quantum time flip and the communication model built on it.

A bidirectional device implementing a bistochastic channel C can be
traversed forward (acting as C) or backward (acting as the Kraus-wise
transpose C^T). Steering the direction with a control qubit produces the
joint channel with Kraus operators

    F_i = C_i (x) |0><0|  +  C_i^T (x) |1><1|

on target (x) control, target first. Fixing the control preparation omega
gives the flipped channel rho -> F(C)(rho (x) omega); measuring the control
and forwarding the outcome classically gives the effective sender-to-
receiver channel.

For channels equal to their transpose, a maximally coherent control plus a
Fourier-basis measurement splits the Kraus list into its symmetric and
antisymmetric parts: the "+" outcome heralds the symmetric-error branch and
the "-" outcome the antisymmetric one. An antisymmetric branch consisting
of a single unitary (for qubits: Pauli Y) is noiseless after heralding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmat
from .channels import (
    KRAUS_CUTOFF,
    SWAP_COMM_TOL,
    TAU_CPTP,
    ChannelValidationError,
    KrausChannel,
    choi_of_channel,
    kraus_channel,
)
from .qmat import (
    KET_MINUS,
    KET_PLUS,
    identity,
    ket,
    projector,
    swap_operator,
    tensor,
)

FOURIER_POVM = (projector(KET_PLUS), projector(KET_MINUS))

# A conditional channel counts as noiseless (unitary) when its Choi matrix is
# rank 1: second-largest eigenvalue below this.
NOISELESS_TOL = 1e-9


@dataclass(frozen=True)
class LabeledRandomChannel:
    """Probability-weighted mixture of channels with classical branch labels.

    The classical label is part of the output: as a channel the mixture acts
    as rho -> sum_l p_l C_l(rho) (x) |e_l><e_l| for orthonormal carriers e_l.
    """

    branches: tuple[tuple[float, KrausChannel, str], ...]

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(b[0] for b in self.branches)

    @property
    def channels(self) -> tuple[KrausChannel, ...]:
        return tuple(b[1] for b in self.branches)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(b[2] for b in self.branches)

    def as_channel(self, carriers: np.ndarray | None = None) -> KrausChannel:
        """Embed the classical register as a quantum output.

        carriers: optional orthonormal columns, one per branch (defaults to
        the computational basis of a register with one level per branch).
        Entropic quantities do not depend on this choice.
        """
        n = len(self.branches)
        if carriers is None:
            carriers = np.eye(n, dtype=complex)
        carriers = np.asarray(carriers, dtype=complex)
        if carriers.shape[1] != n:
            raise ValueError("need one carrier column per branch")
        reg_dim = carriers.shape[0]
        ops = []
        for idx, (p, ch, _) in enumerate(self.branches):
            col = carriers[:, idx].reshape(reg_dim, 1)
            for k in ch.kraus:
                ops.append(np.sqrt(p) * tensor(k, col))
        first = self.branches[0][1]
        return kraus_channel(ops, first.dim_in, first.dim_out * reg_dim)


def labeled_random_channel(branches) -> LabeledRandomChannel:
    """Validate and freeze a labeled random channel."""
    brs = tuple((float(p), ch, str(label)) for p, ch, label in branches)
    if not brs:
        raise ValueError("empty branch list")
    total = sum(p for p, _, _ in brs)
    if any(p < 0 for p, _, _ in brs) or abs(total - 1.0) > 1e-12:
        raise ValueError(f"branch probabilities must be nonnegative and sum to 1, got {total}")
    dims = {(ch.dim_in, ch.dim_out) for _, ch, _ in brs}
    if len(dims) != 1:
        raise ValueError("branch channels must share dimensions")
    labels = [l for _, _, l in brs]
    if len(set(labels)) != len(labels):
        raise ValueError("branch labels must be distinct")
    return LabeledRandomChannel(brs)


@dataclass(frozen=True)
class FlippedChannel:
    """A bidirectional device placed under control of a qubit.

    joint is the target (x) control channel of the flip; channel is the
    effective d -> 2d map rho -> joint(rho (x) control_state). With the
    control at |0><0| the target marginal is the base channel, with |1><1|
    its transpose.
    """

    base: KrausChannel
    control_state: np.ndarray
    joint: KrausChannel
    channel: KrausChannel


def flip_placement(ch: KrausChannel, omega) -> FlippedChannel:
    """Bundle a base channel with its flip for a fixed control preparation."""
    w = qmat.check_density_matrix(omega)
    return FlippedChannel(base=ch, control_state=w,
                          joint=time_flip_kraus(ch),
                          channel=flipped_channel(ch, w))


@dataclass(frozen=True)
class SymAntisymDecomposition:
    """Kraus list of a transposition-invariant channel, split by symmetry.

    Every member of `sym` satisfies K^T = K, every member of `antisym`
    satisfies K^T = -K; together they reconstruct the channel.
    """

    sym: tuple[np.ndarray, ...]
    antisym: tuple[np.ndarray, ...]
    dim: int

    @property
    def sym_weight(self) -> float:
        return sum(float(np.real(np.trace(k.conj().T @ k))) for k in self.sym) / self.dim

    @property
    def antisym_weight(self) -> float:
        return sum(float(np.real(np.trace(k.conj().T @ k))) for k in self.antisym) / self.dim

    def reconstruct(self) -> KrausChannel:
        return kraus_channel(self.sym + self.antisym, self.dim, self.dim)


@dataclass(frozen=True)
class HeraldedOutcome:
    """One branch of the heralded protocol: outcome label, its probability,
    the conditional output state, and whether the branch is unitary."""

    outcome: str
    probability: float
    conditional_state: np.ndarray
    noiseless: bool


def time_flip_kraus(ch: KrausChannel) -> KrausChannel:
    """Joint target (x) control channel with Kraus C_i (x) |0><0| + C_i^T (x) |1><1|.

    Defined on bidirectional processes only, i.e. the input must be
    bistochastic; the output is again bistochastic.
    """
    if not ch.is_square():
        raise ChannelValidationError("time flip requires a square channel")
    if not ch.is_bistochastic():
        raise ChannelValidationError("time flip is defined on bistochastic channels only")
    p0 = projector(ket(0, 2))
    p1 = projector(ket(1, 2))
    ops = [tensor(k, p0) + tensor(k.T, p1) for k in ch.kraus]
    return kraus_channel(ops, 2 * ch.dim_in, 2 * ch.dim_in)


def flipped_channel(ch: KrausChannel, omega) -> KrausChannel:
    """The d -> 2d channel rho -> F(C)(rho (x) omega) for a fixed control state."""
    w = qmat.check_density_matrix(omega)
    if w.shape != (2, 2):
        raise ValueError("control state must be a qubit")
    joint = time_flip_kraus(ch)
    d = ch.dim_in
    lam, vec = np.linalg.eigh(w)
    ops = []
    for k in range(2):
        if lam[k] <= qmat.TAU_PSD:
            continue
        inject = tensor(identity(d), np.sqrt(lam[k]) * vec[:, k].reshape(2, 1))
        ops.extend(f @ inject for f in joint.kraus)
    return kraus_channel(ops, d, 2 * d)


def measurement_channel(povm, tol: float = TAU_CPTP) -> KrausChannel:
    """Quantum-to-classical channel sigma -> sum_j |j><j| tr(P_j sigma)."""
    elements = [np.asarray(p, dtype=complex) for p in povm]
    dim = elements[0].shape[0]
    total = np.zeros((dim, dim), dtype=complex)
    for p in elements:
        if p.shape != (dim, dim) or not qmat.is_hermitian(p):
            raise ValueError("POVM elements must be Hermitian and share a dimension")
        if np.linalg.eigvalsh(p)[0] < -qmat.TAU_PSD:
            raise ValueError("POVM element is not positive semidefinite")
        total += p
    if np.max(np.abs(total - identity(dim))) > tol:
        raise ValueError("POVM elements do not sum to the identity")
    n = len(elements)
    ops = []
    for j, p in enumerate(elements):
        lam, vec = np.linalg.eigh(p)
        for k in range(dim):
            if lam[k] <= KRAUS_CUTOFF:
                continue
            row = np.sqrt(lam[k]) * vec[:, k].conj().reshape(1, dim)
            ops.append(ket(j, n).reshape(n, 1) @ row)
    return kraus_channel(ops, dim, n)


def effective_channel(ch: KrausChannel, omega, povm) -> KrausChannel:
    """Sender-to-receiver channel: flip with control omega, then measure the
    control with the given POVM and record the outcome in a classical register.

    Output lives on target (x) register with one register level per POVM
    element.
    """
    flipped = flipped_channel(ch, omega)
    meas = measurement_channel(povm)
    d = ch.dim_in
    lifted = [tensor(identity(d), m) for m in meas.kraus]
    ops = [m @ f for f in flipped.kraus for m in lifted]
    return kraus_channel(ops, d, d * len(povm))


def sym_antisym_decomposition(ch: KrausChannel,
                              comm_tol: float = SWAP_COMM_TOL,
                              cutoff: float = KRAUS_CUTOFF) -> SymAntisymDecomposition:
    """Split a transposition-invariant channel into symmetric and
    antisymmetric Kraus operators.

    The Choi matrix commutes with SWAP, so it block-diagonalises over the
    SWAP eigensectors; eigenvectors of each block map back to operators that
    are symmetric (+1 sector) or antisymmetric (-1 sector). Output order is
    ascending eigenvalue within each sector, with each operator's phase
    fixed so its first nonzero entry is real positive.
    """
    if not ch.is_square():
        raise ChannelValidationError("decomposition requires a square channel")
    d = ch.dim_in
    c = choi_of_channel(ch).op
    s = swap_operator(d)
    comm = np.linalg.norm(c @ s - s @ c, ord=2)
    if comm > comm_tol:
        raise ChannelValidationError(
            f"channel is not transposition invariant: |[Choi, SWAP]| = {comm:.3e}")
    eye = identity(d * d)
    sectors = []
    for sign in (+1.0, -1.0):
        proj = 0.5 * (eye + sign * s)
        block = proj @ c @ proj
        lam, vec = np.linalg.eigh(block)
        ops = []
        for i in range(len(lam)):  # ascending eigenvalues
            if lam[i] < cutoff:
                continue
            v = qmat.fix_phase(vec[:, i])
            ops.append(np.sqrt(lam[i]) * v.reshape(d, d))
        sectors.append(tuple(ops))
    return SymAntisymDecomposition(sym=sectors[0], antisym=sectors[1], dim=d)


def canonical_effective(ch: KrausChannel,
                        weight_cutoff: float = 1e-12) -> LabeledRandomChannel:
    """Effective channel for the optimal protocol on a transposition-invariant
    channel: maximally coherent control, Fourier measurement.

    Returns the two-branch labeled random channel {(w+, C+, "+"),
    (w-, C-, "-")} where w+ C+ sums the symmetric Kraus conjugations and
    w- C- the antisymmetric ones. Zero-weight branches are dropped.
    """
    deco = sym_antisym_decomposition(ch)
    branches = []
    for ops, label in ((deco.sym, "+"), (deco.antisym, "-")):
        w = sum(float(np.real(np.trace(k.conj().T @ k))) for k in ops) / deco.dim
        if w <= weight_cutoff:
            continue
        scaled = [k / np.sqrt(w) for k in ops]
        branches.append((w, kraus_channel(scaled, deco.dim, deco.dim), label))
    return labeled_random_channel(branches)


def plus_minus_carriers(lrc: LabeledRandomChannel) -> np.ndarray:
    """Carrier columns |+> / |-> matching the branch labels, so that
    lrc.as_channel(...) reproduces the flipped channel with the control kept
    as a qubit, even when one branch has been dropped."""
    columns = []
    for label in lrc.labels:
        if label == "+":
            columns.append(KET_PLUS)
        elif label == "-":
            columns.append(KET_MINUS)
        else:
            raise ValueError(f"unexpected branch label {label!r}")
    return np.column_stack(columns)


def _is_unitary_branch(ch: KrausChannel, tol: float = NOISELESS_TOL) -> bool:
    lam = np.linalg.eigvalsh(choi_of_channel(ch).op)
    return bool(lam[-2] < tol)


def heralded_transmit(ch: KrausChannel, rho) -> list[HeraldedOutcome]:
    """Run the optimal protocol on one input state and tabulate the outcomes.

    Each outcome carries the conditional post-measurement target state and a
    noiseless flag set when the conditional channel is unitary (Choi rank 1),
    in which case the branch transmits perfectly after a known correction.
    """
    state = qmat.check_density_matrix(rho)
    lrc = canonical_effective(ch)
    outcomes = []
    for p, branch, label in lrc.branches:
        outcomes.append(HeraldedOutcome(
            outcome=label,
            probability=p,
            conditional_state=branch.apply(state),
            noiseless=_is_unitary_branch(branch),
        ))
    return outcomes


def dephasing_decode(outcome: HeraldedOutcome) -> np.ndarray:
    """Recovery for the flipped Y-dephasing protocol: identity on "+",
    conjugation by Pauli Y on "-"."""
    if outcome.outcome == "+":
        return np.array(outcome.conditional_state, copy=True)
    return qmat.PAULI_Y @ outcome.conditional_state @ qmat.PAULI_Y


def sample_outcomes(outcomes, shots: int, seed: int) -> dict[str, int]:
    """Monte-Carlo herald statistics: multinomial counts over the outcome table."""
    rng = np.random.default_rng(seed)
    probs = np.array([o.probability for o in outcomes], dtype=float)
    probs = probs / probs.sum()
    counts = rng.multinomial(shots, probs)
    return {o.outcome: int(n) for o, n in zip(outcomes, counts)}
