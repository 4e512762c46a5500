"""Classical and quantum time evolution of the coupled system."""

from .classical import (
    ClassicalState,
    ClassicalTrajectory,
    energy_exchange_frequency,
    integrate_classical,
    normal_mode_frequencies,
    oscillation_period,
    resonant_pair,
)
from .quantum import (
    CutoffError,
    Dissipator,
    EvolutionSpec,
    Hamiltonian,
    QuantumState,
    QuantumTrajectory,
    Space,
    evolve_quantum,
    swap_cool,
    sympathetic_cooling_crosscheck,
)

__all__ = [
    "ClassicalState", "ClassicalTrajectory", "energy_exchange_frequency", "integrate_classical",
    "normal_mode_frequencies", "oscillation_period", "resonant_pair",
    "CutoffError", "Dissipator", "EvolutionSpec", "Hamiltonian", "QuantumState",
    "QuantumTrajectory", "Space", "evolve_quantum", "swap_cool", "sympathetic_cooling_crosscheck",
]
