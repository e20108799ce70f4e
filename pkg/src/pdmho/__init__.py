"""Exactly solvable confined oscillator with position-dependent mass and frequency."""
from .errors import DomainError, NotNormalizableError
from .model import (
    UNIT_PARAMS,
    ConfinedModel,
    PhysicalParams,
    Wavefunction,
    confinement_length,
    energy,
    energy_by_n,
    hermite_wavefunction,
    potential,
    spectrum,
    wavefunction,
)
from .oracle import build_hamiltonian, compare_spectra, eigen_spectrum

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NotNormalizableError",
    "UNIT_PARAMS",
    "ConfinedModel",
    "PhysicalParams",
    "Wavefunction",
    "confinement_length",
    "energy",
    "energy_by_n",
    "hermite_wavefunction",
    "potential",
    "spectrum",
    "wavefunction",
    "build_hamiltonian",
    "compare_spectra",
    "eigen_spectrum",
]
