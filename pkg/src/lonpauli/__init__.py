"""Generalized Pauli measurements in linear optics networks.

Fock sectors and permanent-based unitary lifting (:mod:`lonpauli.fock`),
Pauli classes and eigenbases (:mod:`lonpauli.pauli`), Hadamard-based Pauli
measurements (:mod:`lonpauli.measurement`), entropic uncertainty bounds
(:mod:`lonpauli.quantities`) and two-party entanglement witnesses
(:mod:`lonpauli.bipartite`).
"""

from .bipartite import (
    BipartiteState,
    JointLabelDistribution,
    SeparableConfig,
    build_phi_3A2B,
    build_psi0,
    cmi,
    cmi_report,
    cmi_separable_bound,
    cmp,
    cmp_report,
    cmp_separable_bound,
    extract_targets,
    joint_pauli_measurement,
    joint_subspace_weights,
    mutual_information,
    mutual_predictability,
    noise_threshold,
    phase_shifted_state,
    phi_config,
    product_state,
    sweep,
    white_noise_state,
)
from .fock import (
    MixedState,
    ModeMismatch,
    ModeUnitary,
    PermanentSizeError,
    PhotonNumberMismatch,
    SectorBasis,
    SectorState,
    apply_mode_shift,
    enumerate_basis,
    evolve,
    lift_unitary,
    mu_label,
    permanent,
    transition_amplitude,
)
from .measurement import (
    ConfigError,
    LabelDistribution,
    MeasurementConfig,
    decohere,
    hadamard_unitary,
    measure,
    parse_config,
    pauli_measurement,
    pauli_projector_matrix,
    subspace_weights,
    xi_measurement,
)
from .pauli import (
    PauliClass,
    build_pauli_eigenstate,
    complementary_set,
    is_complementary,
    partition_pauli_classes,
    pauli_classes,
    xi_basis,
)
from .quantities import (
    BoundReport,
    ComplementaryConfig,
    complementary_quantity,
    entropy_lower_bound,
    entropy_report,
    shannon_entropy,
)

__version__ = "0.1.0"
