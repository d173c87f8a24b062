"""Channel representations and constructors.

A channel is stored as a finite Kraus list; the Choi matrix is the canonical
invariant used for equality, validation and decomposition. Convention:

    Choi(C) = (C (x) Id)(|I>><<I|),   |I>> = sum_n |n>(x)|n>,

with the *output* subsystem first, so Choi lives on C^dout (x) C^din.
Kraus-wise transposition in the computational basis corresponds to
conjugating the Choi matrix by SWAP.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import qmat
from .qmat import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    identity,
    ket,
    projector,
    swap_operator,
    tensor,
)

TAU_CPTP = 1e-9
# Eigenvalues below this are treated as zero when extracting Kraus operators
# from a Choi matrix.
KRAUS_CUTOFF = 1e-10
# Choi 2-norm threshold under which two channels count as equal.
CHOI_EQ_TOL = 1e-9
# Commutator norm threshold for transposition invariance ([Choi, SWAP] = 0).
SWAP_COMM_TOL = 1e-8


class ChannelValidationError(ValueError):
    """Raised when a Kraus list or Choi matrix fails a CPTP invariant."""


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive trace-preserving map as a Kraus list.

    Kraus operators have shape (dim_out, dim_in). The list is validated for
    trace preservation on construction via :func:`kraus_channel`.
    """

    kraus: tuple[np.ndarray, ...]
    dim_in: int
    dim_out: int

    def apply(self, rho) -> np.ndarray:
        """sum_i K_i rho K_i^dag."""
        a = np.asarray(rho, dtype=complex)
        if a.shape != (self.dim_in, self.dim_in):
            raise ValueError(
                f"state shape {a.shape} does not match channel input dim {self.dim_in}")
        out = np.zeros((self.dim_out, self.dim_out), dtype=complex)
        for k in self.kraus:
            out += k @ a @ k.conj().T
        return out

    def is_square(self) -> bool:
        return self.dim_in == self.dim_out

    def is_bistochastic(self, tol: float = TAU_CPTP) -> bool:
        """Both completeness sums equal the identity: sum K^dag K = sum K K^dag = I."""
        if not self.is_square():
            return False
        acc = np.zeros((self.dim_in, self.dim_in), dtype=complex)
        for k in self.kraus:
            acc += k @ k.conj().T
        return bool(np.max(np.abs(acc - identity(self.dim_in))) <= tol)

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """Composition other . self (self acts first)."""
        if other.dim_in != self.dim_out:
            raise ValueError("composition dimension mismatch")
        ops = tuple(b @ a for a in self.kraus for b in other.kraus)
        return KrausChannel(ops, self.dim_in, other.dim_out)


@dataclass(frozen=True)
class ChoiMatrix:
    """Bipartite positive operator of a channel, output subsystem first."""

    op: np.ndarray
    dim_in: int
    dim_out: int


def kraus_channel(ops, dim_in: int | None = None, dim_out: int | None = None,
                  tol: float = TAU_CPTP) -> KrausChannel:
    """Build and validate a KrausChannel from a list of matrices."""
    mats = tuple(np.asarray(k, dtype=complex) for k in ops)
    if not mats:
        raise ChannelValidationError("empty Kraus list")
    dout, din = mats[0].shape
    if dim_in is not None and din != dim_in:
        raise ChannelValidationError(f"Kraus column count {din} != dim_in {dim_in}")
    if dim_out is not None and dout != dim_out:
        raise ChannelValidationError(f"Kraus row count {dout} != dim_out {dim_out}")
    for k in mats:
        if k.shape != (dout, din):
            raise ChannelValidationError("inconsistent Kraus shapes")
    acc = np.zeros((din, din), dtype=complex)
    for k in mats:
        acc += k.conj().T @ k
    dev = np.max(np.abs(acc - identity(din)))
    if dev > tol:
        raise ChannelValidationError(
            f"trace preservation violated: max |sum K^dag K - I| = {dev:.3e}")
    return KrausChannel(mats, din, dout)


def unitary_channel(u) -> KrausChannel:
    return kraus_channel([np.asarray(u, dtype=complex)])


def identity_channel(d: int) -> KrausChannel:
    return unitary_channel(identity(d))


def apply(ch: KrausChannel, rho) -> np.ndarray:
    return ch.apply(rho)


# --- Choi calculus ----------------------------------------------------------

def choi_of_channel(ch: KrausChannel) -> ChoiMatrix:
    """Choi(C) = sum_i |K_i>><<K_i| with |K>> = (K (x) I)|I>>."""
    d_in, d_out = ch.dim_in, ch.dim_out
    c = np.zeros((d_out * d_in, d_out * d_in), dtype=complex)
    for k in ch.kraus:
        v = k.reshape(-1)  # row-major flattening == coefficients of |K>>
        c += np.outer(v, v.conj())
    return ChoiMatrix(c, d_in, d_out)


def channel_of_choi(c: ChoiMatrix, tol: float = TAU_CPTP,
                    cutoff: float = KRAUS_CUTOFF) -> KrausChannel:
    """Extract a Kraus list by eigendecomposition, dropping tiny eigenvalues."""
    d_in, d_out = c.dim_in, c.dim_out
    m = np.asarray(c.op, dtype=complex)
    if m.shape != (d_out * d_in, d_out * d_in):
        raise ChannelValidationError("Choi matrix shape does not match recorded dims")
    if not qmat.is_hermitian(m, tol):
        raise ChannelValidationError("Choi matrix is not Hermitian")
    lam, vec = np.linalg.eigh(m)
    if lam[0] < -qmat.TAU_PSD:
        raise ChannelValidationError(f"Choi matrix has eigenvalue {lam[0]} < 0")
    # partial trace over the output (first) factor must give the input identity
    red = qmat.partial_trace(m, (d_out, d_in), keep=1)
    if np.max(np.abs(red - identity(d_in))) > tol:
        raise ChannelValidationError("Choi partial trace over output is not I")
    ops = []
    for i in range(len(lam)):
        if lam[i] < cutoff:
            continue
        v = qmat.fix_phase(vec[:, i])
        ops.append(np.sqrt(lam[i]) * v.reshape(d_out, d_in))
    return kraus_channel(ops, d_in, d_out, tol=tol)


def choi_distance(a: KrausChannel | ChoiMatrix, b: KrausChannel | ChoiMatrix) -> float:
    """Operator 2-norm of the Choi difference; the channel metric used throughout."""
    ca = a.op if isinstance(a, ChoiMatrix) else choi_of_channel(a).op
    cb = b.op if isinstance(b, ChoiMatrix) else choi_of_channel(b).op
    if ca.shape != cb.shape:
        raise ValueError("Choi shapes differ")
    return float(np.linalg.norm(ca - cb, ord=2))


def channels_equal(a: KrausChannel, b: KrausChannel, tol: float = CHOI_EQ_TOL) -> bool:
    return choi_distance(a, b) <= tol


# --- Input-output inversion -------------------------------------------------

def transpose_channel(ch: KrausChannel) -> KrausChannel:
    """Kraus-wise transpose in the fixed basis: the backward use of the device.

    Satisfies Choi(C^T) = SWAP Choi(C) SWAP. Defined for square channels.
    """
    if not ch.is_square():
        raise ChannelValidationError("transpose requires a square channel")
    return KrausChannel(tuple(k.T for k in ch.kraus), ch.dim_in, ch.dim_out)


def adjoint_inversion(ch: KrausChannel) -> KrausChannel:
    """Kraus-wise adjoint {K_i^dag}.

    Kept for comparison only: unlike the transpose this inversion is not an
    admissible supermap (it cannot act locally on part of a bipartite
    channel). Requires a bistochastic input, otherwise the result would not
    be trace preserving.
    """
    if not ch.is_bistochastic():
        raise ChannelValidationError("adjoint inversion requires a bistochastic channel")
    return KrausChannel(tuple(k.conj().T for k in ch.kraus), ch.dim_in, ch.dim_out)


def is_transposition_invariant(ch: KrausChannel, tol: float = SWAP_COMM_TOL) -> bool:
    """C^T = C, checked as commutation of the Choi matrix with SWAP."""
    if not ch.is_square():
        return False
    c = choi_of_channel(ch).op
    s = swap_operator(ch.dim_in)
    return bool(np.linalg.norm(c @ s - s @ c, ord=2) <= tol)


# --- Named channel families -------------------------------------------------

def depolarising(q: float, d: int = 2) -> KrausChannel:
    """rho -> q I/d + (1-q) rho.

    For qubits this is the Pauli channel with weights
    (1 - 3q/4, q/4, q/4, q/4); for d > 2 the channel is built from its Choi
    matrix (q/d) I (x) I + (1-q) |I>><<I| and Kraus-extracted.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"depolarisation probability {q} outside [0, 1]")
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if d == 2:
        w0, w1 = np.sqrt(1.0 - 0.75 * q), np.sqrt(0.25 * q)
        return kraus_channel([w0 * identity(2), w1 * PAULI_X,
                              w1 * PAULI_Y, w1 * PAULI_Z])
    bell = qmat.max_entangled_ket(d, normalised=False)
    c = (q / d) * identity(d * d) + (1.0 - q) * np.outer(bell, bell.conj())
    return channel_of_choi(ChoiMatrix(c, d, d))


def depolarising_kraus_general(q: float, d: int) -> KrausChannel:
    """Explicit general-d Kraus list {sqrt(q/d) |j><i|} + {sqrt(1-q) I}.

    The sqrt(q/d) weight is what the completeness sum requires:
    sum_ij (q/d) |i><j||j><i| = q I, plus (1-q) I from the identity term.
    Defines the same channel as :func:`depolarising`.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"depolarisation probability {q} outside [0, 1]")
    if d < 2:
        raise ValueError("dimension must be at least 2")
    ops = [np.sqrt(1.0 - q) * identity(d)]
    w = np.sqrt(q / d)
    for i in range(d):
        for j in range(d):
            m = np.zeros((d, d), dtype=complex)
            m[j, i] = w
            ops.append(m)
    return kraus_channel(ops)


def dephasing_y(p: float) -> KrausChannel:
    """rho -> (1-p) rho + p Y rho Y."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"dephasing probability {p} outside [0, 1]")
    return kraus_channel([np.sqrt(1.0 - p) * identity(2), np.sqrt(p) * PAULI_Y])


def dephasing_z(p: float) -> KrausChannel:
    """rho -> (1-p) rho + p Z rho Z (all-symmetric Kraus)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"dephasing probability {p} outside [0, 1]")
    return kraus_channel([np.sqrt(1.0 - p) * identity(2), np.sqrt(p) * PAULI_Z])


def projection_kraus(theta: float, m: int, n: int, d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The two rank-1 projectors on span{|m>, |n>} at angle theta, plus the
    complement projector I - |m><m| - |n><n|. All three are real symmetric."""
    if m == n:
        raise ValueError("indices m and n must differ")
    if not (0 <= m < d and 0 <= n < d):
        raise ValueError("indices out of range")
    s, c = np.sin(theta), np.cos(theta)
    p0 = np.zeros((d, d), dtype=complex)
    p0[m, m] = 0.5 * (1.0 + s)
    p0[m, n] = 0.5 * c
    p0[n, m] = 0.5 * c
    p0[n, n] = 0.5 * (1.0 - s)
    p1 = np.zeros((d, d), dtype=complex)
    p1[m, m] = 0.5 * (1.0 - s)
    p1[m, n] = -0.5 * c
    p1[n, m] = -0.5 * c
    p1[n, n] = 0.5 * (1.0 + s)
    comp = identity(d)
    comp[m, m] = 0.0
    comp[n, n] = 0.0
    return p0, p1, comp


def projection_channel(theta: float, m: int, n: int, d: int) -> KrausChannel:
    """Pinching onto a theta-rotated basis of span{|m>, |n>}, identity elsewhere.

    All Kraus operators are real symmetric, so the channel is transposition
    invariant and untouched by the time flip.
    """
    p0, p1, comp = projection_kraus(theta, m, n, d)
    ops = [p0, p1]
    if d > 2:
        ops.append(comp)
    return kraus_channel(ops)


def uniform_projection_channel(d: int) -> KrausChannel:
    """Complete dephasing in the computational basis: rho -> sum_m |m><m| rho |m><m|.

    Equals the uniform (1/2d)-weighted mixture of all computational-basis
    projector pairs; the Kraus operators are symmetric.
    """
    ops = [projector(ket(m, d)) for m in range(d)]
    return kraus_channel(ops)


def random_bistochastic(d: int, r: int, seed: int) -> KrausChannel:
    """Random mixture of r Haar-random unitaries; deterministic under the seed."""
    if r < 1:
        raise ValueError("unitary count must be >= 1")
    rng = np.random.default_rng(seed)
    probs = rng.random(r)
    probs /= probs.sum()
    ops = [np.sqrt(p) * qmat.random_unitary(d, rng) for p in probs]
    return kraus_channel(ops)


def random_transposition_invariant(d: int, r: int, seed: int,
                                   antisym_weight: float = 0.5) -> KrausChannel:
    """Random mixture of symmetric and antisymmetric unitaries.

    Symmetric unitaries are exp(iS) with S real symmetric; antisymmetric
    unitaries exist only in even dimension and are built as Y (x) W with W a
    symmetric unitary on d/2 levels. All Kraus operators of the result are
    individually symmetric or antisymmetric, so the channel equals its
    transpose by construction.
    """
    if r < 1:
        raise ValueError("unitary count must be >= 1")
    rng = np.random.default_rng(seed)
    probs = rng.random(r)
    probs /= probs.sum()
    ops = []
    for p in probs:
        anti = d % 2 == 0 and rng.random() < antisym_weight
        dd = d // 2 if anti else d
        s = rng.normal(size=(dd, dd))
        s = s + s.T
        lam, v = np.linalg.eigh(s)
        u = (v * np.exp(1j * lam)) @ v.T  # exp(iS), symmetric since v is real
        if anti:
            u = tensor(PAULI_Y, u)
        ops.append(np.sqrt(p) * u)
    return kraus_channel(ops)


def tensor_channel(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """Parallel composition a (x) b acting on the joint system."""
    ops = tuple(tensor(ka, kb) for ka in a.kraus for kb in b.kraus)
    return KrausChannel(ops, a.dim_in * b.dim_in, a.dim_out * b.dim_out)


def trace_out_channel(dims: tuple[int, int], keep: int) -> KrausChannel:
    """Partial trace over one tensor factor, as a channel."""
    da, db = dims
    if keep == 0:
        ops = [tensor(identity(da), ket(j, db).conj().reshape(1, db)) for j in range(db)]
        return KrausChannel(tuple(ops), da * db, da)
    if keep == 1:
        ops = [tensor(ket(j, da).conj().reshape(1, da), identity(db)) for j in range(da)]
        return KrausChannel(tuple(ops), da * db, db)
    raise ValueError("keep must be 0 or 1")


def constant_channel(sigma, d_in: int) -> KrausChannel:
    """rho -> sigma * tr(rho), discarding the input entirely."""
    s = qmat.check_density_matrix(sigma)
    lam, vec = np.linalg.eigh(s)
    ops = []
    for k in range(len(lam)):
        if lam[k] <= qmat.TAU_PSD:
            continue
        col = np.sqrt(lam[k]) * vec[:, k].reshape(-1, 1)
        for j in range(d_in):
            ops.append(col @ ket(j, d_in).conj().reshape(1, d_in))
    return kraus_channel(ops, d_in, s.shape[0])


def append_state_channel(d: int, omega) -> KrausChannel:
    """rho -> rho (x) omega, attaching a fixed ancilla after the system."""
    w = qmat.check_density_matrix(omega)
    lam, vec = np.linalg.eigh(w)
    ops = []
    for k in range(len(lam)):
        if lam[k] <= qmat.TAU_PSD:
            continue
        ops.append(tensor(identity(d), np.sqrt(lam[k]) * vec[:, k].reshape(-1, 1)))
    return kraus_channel(ops, d, d * w.shape[0])


# --- JSON channel files -----------------------------------------------------
#
# { "dim": d, "kraus": [matrix, ...] } with matrices in the shared flat
# row-major [re, im] encoding.

def channel_to_json(ch: KrausChannel) -> dict:
    if not ch.is_square():
        raise ValueError("channel files hold square channels only")
    return {
        "dim": ch.dim_in,
        "kraus": [qmat.complex_matrix_to_json(k) for k in ch.kraus],
    }


def channel_from_json(data: dict) -> KrausChannel:
    try:
        d = int(data["dim"])
        raw = data["kraus"]
    except (KeyError, TypeError) as exc:
        raise ChannelValidationError(f"malformed channel JSON: missing {exc}") from exc
    if d < 1 or not raw:
        raise ChannelValidationError("channel JSON needs dim >= 1 and a nonempty kraus list")
    ops = [qmat.complex_matrix_from_json(k, (d, d)) for k in raw]
    return kraus_channel(ops, d, d)


def load_channel(path) -> KrausChannel:
    with open(path, "r", encoding="utf-8") as fh:
        return channel_from_json(json.load(fh))


def save_channel(ch: KrausChannel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(channel_to_json(ch), fh, sort_keys=True)
        fh.write("\n")
