"""Spontaneous photon-scattering error budgets for trapped-ion hyperfine qubit gates."""

from .species import IonSpecies, NoDLevelError, SpeciesFormatError, default_registry, load_registry
from .scattering import BeamConfig, PoleError

__all__ = [
    "BeamConfig",
    "IonSpecies",
    "NoDLevelError",
    "PoleError",
    "SpeciesFormatError",
    "default_registry",
    "load_registry",
]

__version__ = "0.1.0"
