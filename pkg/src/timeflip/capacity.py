"""Capacity quantities for channels used in an indefinite input-output direction.

Everything is single-letter and in bits (qubits for coherent information).
Closed forms are implemented exactly as stated, with the 0 log 0 = 0
convention at the endpoints; a brute-force ensemble search doubles as an
independent oracle for each of them. Quantum-capacity lower bounds reported
here are also private-capacity lower bounds (P >= Q); the private capacity
is never computed separately.

For qubit targets the flipped depolarising values are classical capacities
(the branch channels are unital qubit channels, hence Holevo additive); for
d >= 3 the general formula is reported strictly as Holevo information.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize

from . import qmat
from .channels import KrausChannel, dephasing_y
from .flip import LabeledRandomChannel, canonical_effective
from .qmat import binary_entropy, identity, ket, projector, von_neumann_entropy, xlog2x

DEFAULT_SEED = 0xF11F
DEFAULT_ENVELOPE_GRID = 8192

# Classical capacities reached by two completely depolarising qubit channels
# on two coherently controlled paths, and in two coherently controlled
# orders. Literature constants for comparison; not computed here.
SUPERPOSED_PATHS_CAPACITY = 0.16
SUPERPOSED_ORDERS_CAPACITY = 0.049


@dataclass(frozen=True)
class Ensemble:
    """Probability-weighted list of input states for Holevo evaluation."""

    probs: tuple[float, ...]
    states: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def average(self) -> np.ndarray:
        out = np.zeros_like(self.states[0])
        for p, s in zip(self.probs, self.states):
            out += p * s
        return out


def ensemble(members) -> Ensemble:
    """Validate probabilities and state dimensions, freeze the ensemble."""
    probs = tuple(float(p) for p, _ in members)
    states = tuple(np.asarray(s, dtype=complex) for _, s in members)
    if not states:
        raise ValueError("empty ensemble")
    if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-12:
        raise ValueError("ensemble probabilities must be nonnegative and sum to 1")
    dim = states[0].shape[0]
    if any(s.shape != (dim, dim) for s in states):
        raise ValueError("ensemble states must share a dimension")
    return Ensemble(probs, states)


def uniform_basis_ensemble(d: int) -> Ensemble:
    """Uniform sampling of the computational basis."""
    return ensemble([(1.0 / d, projector(ket(m, d))) for m in range(d)])


# --- Holevo information -----------------------------------------------------

def holevo_of_ensemble(ch: KrausChannel, ens: Ensemble) -> float:
    """chi = H(N(rho_bar)) - sum_x p_x H(N(rho_x)) at a fixed ensemble."""
    if ens.dim != ch.dim_in:
        raise ValueError(
            f"ensemble dimension {ens.dim} does not match channel input {ch.dim_in}")
    out_avg = ch.apply(ens.average())
    total = von_neumann_entropy(out_avg, validate=False)
    for p, s in zip(ens.probs, ens.states):
        if p == 0.0:
            continue
        total -= p * von_neumann_entropy(ch.apply(s), validate=False)
    return float(total)


def _angles_to_ket(theta: np.ndarray, phi: np.ndarray, d: int) -> np.ndarray:
    # hypersphere parameterisation: unit vector for any real angles
    c = np.zeros(d, dtype=complex)
    sin_prod = 1.0
    for j in range(d - 1):
        c[j] = sin_prod * np.cos(theta[j])
        sin_prod *= np.sin(theta[j])
    c[d - 1] = sin_prod
    c[1:] *= np.exp(1j * phi)
    return c


def _params_to_ensemble(x: np.ndarray, d: int, k: int) -> Ensemble | None:
    per_state = 2 * (d - 1)
    weights = x[k * per_state:] ** 2
    norm = weights.sum()
    if norm <= 0.0:
        return None
    weights = weights / norm
    members = []
    for i in range(k):
        block = x[i * per_state:(i + 1) * per_state]
        v = _angles_to_ket(block[:d - 1], block[d - 1:], d)
        members.append((weights[i], projector(v)))
    return Ensemble(tuple(float(w) for w in weights), tuple(s for _, s in members))


def _basis_seed(d: int, k: int) -> np.ndarray:
    per_state = 2 * (d - 1)
    x = np.zeros(k * per_state + k)
    for i in range(k):
        target = i % d
        for j in range(min(target, d - 1)):
            x[i * per_state + j] = np.pi / 2
        if target == d - 1:
            x[i * per_state + d - 2] = np.pi / 2
    x[k * per_state:k * per_state + d] = 1.0
    return x


def holevo_maximize(ch: KrausChannel, restarts: int = 100,
                    iterations: int = 4000,
                    seed: int = DEFAULT_SEED) -> tuple[float, Ensemble]:
    """Brute-force Holevo information of a qubit or qutrit channel.

    Searches ensembles of up to d^2 pure states (hypersphere angles plus a
    probability simplex) by multistart Nelder-Mead, with the uniform
    computational-basis ensemble as the first start. Serves as the
    independent oracle for every closed form in this module.
    """
    d = ch.dim_in
    if d > 3:
        raise ValueError("brute-force search supports qubit and qutrit channels only")
    k = d * d
    per_state = 2 * (d - 1)
    nparams = k * per_state + k

    def objective(x):
        ens = _params_to_ensemble(x, d, k)
        if ens is None:
            return 0.0
        return -holevo_of_ensemble(ch, ens)

    rng = np.random.default_rng(seed)
    best_val, best_x = -np.inf, None
    for trial in range(max(1, restarts)):
        if trial == 0:
            x0 = _basis_seed(d, k)
        else:
            x0 = np.concatenate([
                rng.uniform(0.0, np.pi, k * per_state),
                rng.uniform(0.1, 1.0, k),
            ])
        res = optimize.minimize(objective, x0, method="Nelder-Mead",
                                options={"maxiter": iterations,
                                         "xatol": 1e-7, "fatol": 1e-11})
        if -res.fun > best_val:
            best_val, best_x = -res.fun, res.x
    return float(best_val), _params_to_ensemble(best_x, d, k)


def holevo_labeled_random(lrc: LabeledRandomChannel, ens: Ensemble,
                          validate: bool = False, restarts: int = 20,
                          seed: int = DEFAULT_SEED,
                          opt_tol: float = 1e-4) -> float:
    """Holevo information of a labeled random channel, sum_l p_l chi(C_l, ens).

    The label is part of the output, so this equals the mixture's Holevo
    information provided the single ensemble attains every branch optimum
    simultaneously. With validate=True that premise is checked against the
    brute-force search and a failure raises.
    """
    per_branch = [holevo_of_ensemble(c, ens) for c in lrc.channels]
    if validate:
        for (p, c, label), achieved in zip(lrc.branches, per_branch):
            opt, _ = holevo_maximize(c, restarts=restarts, seed=seed)
            if achieved < opt - opt_tol:
                raise ValueError(
                    f"ensemble is not optimal for branch {label!r}: "
                    f"{achieved:.6f} < {opt:.6f}")
    return float(sum(p * v for p, v in zip(lrc.probabilities, per_branch)))


# --- Closed forms: depolarising family --------------------------------------

def classical_capacity_depolarising(q: float) -> float:
    """Classical capacity of the qubit depolarising channel."""
    _check_prob(q)
    return 1.0 + xlog2x(1.0 - q / 2.0) + xlog2x(q / 2.0)


def flipped_depolarising_gap(q: float) -> float:
    """Capacity gained by the flip: -(q/4) log2 q - (1 - q/4) log2(1 - q/4)."""
    _check_prob(q)
    first = 0.0 if q == 0.0 else -(q / 4.0) * np.log2(q)
    return float(first - xlog2x(1.0 - q / 4.0))


def classical_capacity_flipped_depolarising(q: float) -> float:
    """Classical capacity of the flipped qubit depolarising channel:
    the original capacity plus the (nonnegative) flip gap."""
    return classical_capacity_depolarising(q) + flipped_depolarising_gap(q)


def holevo_flipped_depolarising_general(q: float, d: int) -> float:
    """Holevo information of the flipped depolarising channel on d levels.

    At d = 2 this equals the flipped classical capacity; for d >= 3 it is a
    Holevo information only (additivity is not established there).
    """
    _check_prob(q)
    if d < 2:
        raise ValueError("dimension must be at least 2")
    w_plus = 1.0 - q / 2.0 + q / (2.0 * d)
    w_minus = q / 2.0 - q / (2.0 * d)
    value = np.log2(d) - xlog2x(w_plus) + xlog2x(1.0 - q + q / d)
    value += (d - 1) * xlog2x(q / (2.0 * d))
    value -= w_minus * np.log2(d - 1) if d > 2 else 0.0
    return float(value)


# --- Coherent information ---------------------------------------------------

def coherent_information(ch: KrausChannel, rho) -> float:
    """I_c(N, rho) = H(N(rho)) - H((N (x) Id)(Psi_rho)) in qubits.

    The purification reference has dimension equal to the rank of rho.
    """
    state = qmat.check_density_matrix(rho)
    if state.shape[0] != ch.dim_in:
        raise ValueError("state dimension does not match channel input")
    lam, vec = np.linalg.eigh(state)
    support = lam > qmat.TAU_PSD
    lam, vec = lam[support], vec[:, support]
    rank = int(lam.size)
    # |Psi> = sum_k sqrt(lam_k) |e_k> (x) |k>_R; row-major flatten of the
    # (system, reference) coefficient matrix
    psi = (vec * np.sqrt(lam)).reshape(-1)
    joint_in = np.outer(psi, psi.conj())
    joint_out = np.zeros((ch.dim_out * rank, ch.dim_out * rank), dtype=complex)
    eye_r = identity(rank)
    for k in ch.kraus:
        kk = np.kron(k, eye_r)
        joint_out += kk @ joint_in @ kk.conj().T
    h_out = von_neumann_entropy(ch.apply(state), validate=False)
    h_joint = von_neumann_entropy(joint_out, validate=False)
    return float(h_out - h_joint)


def flipped_depolarising_output_entropy(q: float, d: int) -> float:
    """Entropy of the flipped depolarising output on the maximally mixed input."""
    _check_prob(q)
    a = 1.0 / d - q / (2.0 * d) + q / (2.0 * d * d)
    b = q / (2.0 * d) - q / (2.0 * d * d)
    return float(-d * xlog2x(a) - d * xlog2x(b))


def flipped_depolarising_joint_entropy(q: float, d: int) -> float:
    """Entropy of the flipped depolarising output on half a maximally
    entangled input, jointly with the untouched half."""
    _check_prob(q)
    return float(-(d * d - 1) * xlog2x(q / (d * d)) - xlog2x(1.0 - q + q / (d * d)))


def coherent_info_flipped_depolarising(q: float, d: int) -> float:
    """Coherent information of the flipped depolarising channel at input I/d.

    Lower bound on the flipped channel's quantum capacity (and, through
    P >= Q, on its private capacity).
    """
    return flipped_depolarising_output_entropy(q, d) - flipped_depolarising_joint_entropy(q, d)


def quantum_capacity_dephasing(p: float) -> float:
    """Quantum capacity 1 - H(p) of the Y-dephasing qubit channel."""
    _check_prob(p)
    return 1.0 - binary_entropy(p)


# --- Smith-Smolin convex-envelope bound --------------------------------------

def _binary_entropy_vec(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    inner = (p > 0.0) & (p < 1.0)
    x = p[inner]
    out[inner] = -x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x)
    return out


def smith_smolin_components(p: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three functions whose convex envelope bounds the depolarising
    quantum capacity, on the Pauli-error axis p = 3q/4."""
    p = np.asarray(p, dtype=float)
    f1 = 1.0 - _binary_entropy_vec(p)
    root = np.sqrt(1.0 - p)
    gamma = 4.0 * root * (1.0 - root)
    f2 = _binary_entropy_vec((1.0 - gamma) / 2.0) - _binary_entropy_vec(gamma / 2.0)
    f3 = 1.0 - 4.0 * p
    return f1, f2, f3


def lower_convex_envelope(xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vertices of the lower convex hull of sampled points (monotone chain).

    xs must be strictly increasing. Linear interpolation between the
    returned vertices is the greatest convex function below the samples.
    """
    hull_x: list[float] = []
    hull_y: list[float] = []
    for x, y in zip(xs, ys):
        while len(hull_x) >= 2:
            cross = (hull_x[-1] - hull_x[-2]) * (y - hull_y[-2]) \
                - (hull_y[-1] - hull_y[-2]) * (x - hull_x[-2])
            if cross <= 0.0:
                hull_x.pop()
                hull_y.pop()
            else:
                break
        hull_x.append(float(x))
        hull_y.append(float(y))
    return np.asarray(hull_x), np.asarray(hull_y)


@lru_cache(maxsize=8)
def _smith_smolin_hull(grid_size: int) -> tuple[np.ndarray, np.ndarray]:
    ps = np.linspace(0.0, 1.0, grid_size)
    f1, f2, f3 = smith_smolin_components(ps)
    ys = np.minimum(np.minimum(f1, f2), f3)
    return lower_convex_envelope(ps, ys)


def smith_smolin_upper_bound(q: float, grid_size: int = DEFAULT_ENVELOPE_GRID) -> float:
    """Convex-envelope upper bound on the depolarising quantum capacity.

    Evaluated by hull interpolation on a dense sample over p in [0, 1] with
    p = 3q/4, then clamped at 0 (capacities are nonnegative). Approximation
    error is O(1/grid_size) in p.
    """
    _check_prob(q)
    if grid_size < 1024:
        raise ValueError("grid_size must be at least 1024")
    hx, hy = _smith_smolin_hull(int(grid_size))
    value = float(np.interp(0.75 * q, hx, hy))
    return max(0.0, value)


# --- Curve sweeps ------------------------------------------------------------

@dataclass
class CapacityCurve:
    """Sampled capacity/bound values: (parameter, value, quantity) triples
    plus the metadata that goes into every CSV row."""

    parameter_name: str
    points: list[tuple[float, float, str]] = field(default_factory=list)
    family: str = ""
    dim: int = 2
    formulas: dict[str, str] = field(default_factory=dict)


_DEPOLARISING_QUANTITIES = {
    "C": ("depolarising-classical-capacity",
          lambda q, d, gs: classical_capacity_depolarising(q)),
    "C_flipped": ("flipped-depolarising-classical-capacity",
                  lambda q, d, gs: classical_capacity_flipped_depolarising(q)),
    "smith_smolin": ("smith-smolin-envelope",
                     lambda q, d, gs: smith_smolin_upper_bound(q, gs)),
    "Ic_flipped": ("flipped-depolarising-coherent-info",
                   lambda q, d, gs: coherent_info_flipped_depolarising(q, d)),
    "holevo_flipped": ("flipped-depolarising-holevo",
                       lambda q, d, gs: holevo_flipped_depolarising_general(q, d)),
}


def _flipped_dephasing_coherent_info(p: float) -> float:
    lrc = canonical_effective(dephasing_y(p))
    return coherent_information(lrc.as_channel(), identity(2) / 2.0)


_DEPHASING_QUANTITIES = {
    "Q": ("dephasing-quantum-capacity",
          lambda p, d, gs: quantum_capacity_dephasing(p)),
    "Q_flipped": ("flipped-dephasing-coherent-info",
                  lambda p, d, gs: _flipped_dephasing_coherent_info(p)),
}

_FAMILIES = {
    "depolarising": ("q", _DEPOLARISING_QUANTITIES),
    "dephasing": ("p", _DEPHASING_QUANTITIES),
}


def curve_sweep(family: str, quantity, grid, d: int = 2,
                grid_size: int = DEFAULT_ENVELOPE_GRID) -> CapacityCurve:
    """Evaluate one or more closed forms pointwise over a parameter grid.

    quantity is a single identifier or an iterable of them; points come out
    ordered by parameter, then by the given quantity order. Deterministic.
    """
    if family not in _FAMILIES:
        raise ValueError(f"unknown channel family {family!r}")
    pname, table = _FAMILIES[family]
    quantities = [quantity] if isinstance(quantity, str) else list(quantity)
    for qid in quantities:
        if qid not in table:
            raise ValueError(f"unknown quantity {qid!r} for family {family!r}")
    grid = [float(g) for g in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid parameters must be strictly increasing")
    curve = CapacityCurve(parameter_name=pname, family=family, dim=d,
                          formulas={qid: table[qid][0] for qid in quantities})
    for g in grid:
        for qid in quantities:
            value = table[qid][1](g, d, grid_size)
            if not np.isfinite(value):
                raise ValueError(f"non-finite value for {qid} at {pname}={g}")
            curve.points.append((g, float(value), qid))
    return curve


CSV_HEADER = "parameter,quantity,value,family,d,formula"


def curve_csv_lines(curve: CapacityCurve) -> list[str]:
    """Render a curve in the shared CSV schema, 12 significant digits."""
    lines = [CSV_HEADER]
    for param, value, qid in curve.points:
        lines.append(f"{param:.12g},{qid},{value:.12g},{curve.family},"
                     f"{curve.dim},{curve.formulas[qid]}")
    return lines


def _check_prob(x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"parameter {x} outside [0, 1]")
