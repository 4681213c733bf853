"""Pinned physical constants (CODATA 2018, SI units).

These are fixed on purpose rather than pulled from ``scipy.constants`` so
that every derived number in the package is reproducible bit-for-bit
regardless of the installed SciPy release.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    c: float = 299792458.0  # m/s
    epsilon0: float = 8.8541878128e-12  # F/m
    amu: float = 1.66053906660e-27  # kg


CONSTANTS = PhysicalConstants()

HBAR = CONSTANTS.hbar
C = CONSTANTS.c
EPS0 = CONSTANTS.epsilon0
AMU = CONSTANTS.amu
