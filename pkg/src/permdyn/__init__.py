"""Exact permutation dynamics of a periodic Ising spin chain."""

from .chain import (
    ChainModel,
    MoverView,
    OrbitRecord,
    PositionPermutation,
    SpinConfig,
    apply_update,
    count_up_down,
    enumerate_orbits,
    magnetization,
    mover_check,
    mover_decompose,
    new_chain,
    orbit_of,
    spin_flip,
    translate,
)
from .hamiltonian import (
    OperatorPolynomial,
    add_magnetization_term,
    apply_hamiltonian,
    dense_hamiltonian,
    orbit_spectrum,
    synthesize_exact,
    synthesize_reduced,
)
from .quantum import (
    PerturbationSpec,
    approx_hamiltonian,
    commutator_action,
    entanglement_entropy,
    evolve,
    evolve_dense,
    perturb,
    superposition_weight,
)
from .state import QuantumState

__version__ = "0.1.0"

__all__ = [
    "ChainModel",
    "MoverView",
    "OperatorPolynomial",
    "OrbitRecord",
    "PerturbationSpec",
    "PositionPermutation",
    "QuantumState",
    "SpinConfig",
    "add_magnetization_term",
    "apply_hamiltonian",
    "apply_update",
    "approx_hamiltonian",
    "commutator_action",
    "count_up_down",
    "dense_hamiltonian",
    "entanglement_entropy",
    "enumerate_orbits",
    "evolve",
    "evolve_dense",
    "magnetization",
    "mover_check",
    "mover_decompose",
    "new_chain",
    "orbit_of",
    "orbit_spectrum",
    "perturb",
    "spin_flip",
    "superposition_weight",
    "synthesize_exact",
    "synthesize_reduced",
    "translate",
]
