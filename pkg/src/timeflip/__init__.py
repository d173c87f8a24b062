"""Toolkit for quantum communication through bidirectional channels used in
an indefinite input-output direction: the time-flip supermap, flipped and
effective channels, heralded transmission, and the capacity quantities that
measure what the indefinite direction buys."""

from .capacity import (
    CapacityCurve,
    Ensemble,
    classical_capacity_depolarising,
    classical_capacity_flipped_depolarising,
    coherent_info_flipped_depolarising,
    coherent_information,
    curve_sweep,
    ensemble,
    holevo_flipped_depolarising_general,
    holevo_labeled_random,
    holevo_maximize,
    holevo_of_ensemble,
    quantum_capacity_dephasing,
    smith_smolin_upper_bound,
    uniform_basis_ensemble,
)
from .channels import (
    ChoiMatrix,
    KrausChannel,
    adjoint_inversion,
    channel_of_choi,
    channels_equal,
    choi_distance,
    choi_of_channel,
    dephasing_y,
    dephasing_z,
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
from .flip import (
    HeraldedOutcome,
    LabeledRandomChannel,
    SymAntisymDecomposition,
    canonical_effective,
    dephasing_decode,
    effective_channel,
    flipped_channel,
    heralded_transmit,
    labeled_random_channel,
    sym_antisym_decomposition,
    time_flip_kraus,
)
from .nogo import LemmaReport, fixed_output_check, side_channel_scan, sym_chan_flip_identity
from .qmat import (
    binary_entropy,
    eigvals_hermitian,
    fidelity,
    partial_trace,
    tensor,
    von_neumann_entropy,
)

__version__ = "0.1.0"
