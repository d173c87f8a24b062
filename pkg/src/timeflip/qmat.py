"""Dense complex linear algebra and entropy primitives for small dimensions.

Operators are plain complex numpy arrays in the fixed computational basis
{|0>, ..., |d-1>}; transposes and conjugates always refer to that basis.
All entropies are in bits (log base 2). Everything here is pure and
allocation-only, safe to call concurrently.
"""

from __future__ import annotations

import numpy as np

# Validation tolerances. Double-precision eigensolves on the matrices this
# package handles (d <= 8 systems, Choi matrices up to 64x64) stay well
# inside these bounds.
TAU_HERM = 1e-9
TAU_TRACE = 1e-9
TAU_PSD = 1e-10

LOG2 = np.log(2.0)


class StateValidationError(ValueError):
    """Raised when a matrix fails a density-matrix invariant."""


def as_operator(m) -> np.ndarray:
    """Coerce to a square complex matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def ket(index: int, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[index] = 1.0
    return v


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj())


# Single-qubit constants used throughout.
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


def swap_operator(d: int) -> np.ndarray:
    """SWAP on C^d (x) C^d: SWAP(|a>(x)|b>) = |b>(x)|a>."""
    s = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            s[b * d + a, a * d + b] = 1.0
    return s


def max_entangled_ket(d: int, normalised: bool = True) -> np.ndarray:
    """|I>> = sum_n |n>(x)|n>, optionally normalised by 1/sqrt(d)."""
    v = np.eye(d, dtype=complex).reshape(d * d)
    return v / np.sqrt(d) if normalised else v


def tensor(a, b) -> np.ndarray:
    """Kronecker product; the left factor varies slowest."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Reduce a bipartite operator on C^dA (x) C^dB to one subsystem.

    keep=0 keeps the first (slow) factor, keep=1 the second. Trace is
    preserved: tr(result) == tr(m).
    """
    da, db = dims
    a = np.asarray(m, dtype=complex)
    if a.shape != (da * db, da * db):
        raise ValueError(f"operator shape {a.shape} does not match dims {dims}")
    if keep not in (0, 1):
        raise ValueError("keep must be 0 or 1")
    t = a.reshape(da, db, da, db)
    if keep == 0:
        return np.trace(t, axis1=1, axis2=3)
    return np.trace(t, axis1=0, axis2=2)


def is_hermitian(m, tol: float = TAU_HERM) -> bool:
    a = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def eigvals_hermitian(m, tol: float = TAU_HERM) -> np.ndarray:
    """Real spectrum of a Hermitian matrix, ascending."""
    a = as_operator(m)
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(a)


def eigh_hermitian(m, tol: float = TAU_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix."""
    a = as_operator(m)
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    return np.linalg.eigh(a)


def check_density_matrix(rho, herm_tol: float = TAU_HERM,
                         trace_tol: float = TAU_TRACE,
                         psd_tol: float = TAU_PSD) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return the array."""
    a = as_operator(rho)
    if not is_hermitian(a, herm_tol):
        raise StateValidationError("density matrix is not Hermitian")
    tr = np.trace(a)
    if abs(tr - 1.0) > trace_tol:
        raise StateValidationError(f"density matrix trace {tr} is not 1")
    lo = np.linalg.eigvalsh(a)[0]
    if lo < -psd_tol:
        raise StateValidationError(f"density matrix has eigenvalue {lo} < 0")
    return a


def purity(rho) -> float:
    a = as_operator(rho)
    return float(np.real(np.trace(a @ a)))


def von_neumann_entropy(rho, validate: bool = True) -> float:
    """H(rho) = -sum lam log2 lam in bits, with 0 log 0 = 0.

    Eigenvalues in (-TAU_PSD, 0) are clamped to 0 before taking logs.
    """
    a = check_density_matrix(rho) if validate else as_operator(rho)
    lam = np.linalg.eigvalsh(a)
    lam = np.clip(lam, 0.0, 1.0)
    nz = lam[lam > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def binary_entropy(p: float) -> float:
    """H(p) = -p log2 p - (1-p) log2 (1-p); exact 0 at the endpoints."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p))


def xlog2x(x: float) -> float:
    """x log2 x with the 0 log 0 = 0 convention."""
    return 0.0 if x == 0.0 else x * np.log(x) / LOG2


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    r = as_operator(rho)
    s = as_operator(sigma)
    lam, v = np.linalg.eigh(r)
    lam = np.clip(lam, 0.0, None)
    sqrt_r = (v * np.sqrt(lam)) @ v.conj().T
    inner = sqrt_r @ s @ sqrt_r
    mu = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(np.sum(np.sqrt(mu)) ** 2)


def fix_phase(vec: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate a global phase so the first nonzero component is real positive."""
    v = np.asarray(vec, dtype=complex)
    for x in v:
        if abs(x) > tol:
            return v * (abs(x) / x)
    return v


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian with phase correction."""
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_density_matrix(d: int, rng: np.random.Generator,
                          rank: int | None = None) -> np.ndarray:
    """Random mixed state: normalised Wishart of the requested rank."""
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    w = g @ g.conj().T
    return w / np.trace(w)


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


# --- JSON wire format -------------------------------------------------------
#
# A complex number is a two-element array [re, im]; a matrix is the flat
# row-major array of such pairs. All modules share this encoding.

def complex_matrix_to_json(m) -> list[list[float]]:
    a = np.asarray(m, dtype=complex)
    return [[float(x.real), float(x.imag)] for x in a.reshape(-1)]


def complex_matrix_from_json(data, shape: tuple[int, int]) -> np.ndarray:
    rows, cols = shape
    flat = np.asarray(data, dtype=float)
    if flat.ndim != 2 or flat.shape[1] != 2 or flat.shape[0] != rows * cols:
        raise ValueError(
            f"expected {rows * cols} [re, im] pairs, got array of shape {flat.shape}")
    return (flat[:, 0] + 1j * flat[:, 1]).reshape(rows, cols)
