"""Off-resonant scattering rates and per-pi-pulse scattering probabilities.

Both Raman beams are linearly polarised (b- = b+ = r- = -r+ = 1/sqrt(2)) with
equal resonant coupling g, so every expression depends on the detuning only
through Delta and Delta - omega_f. Detunings are angular (rad/s) and measured
from the S1/2 -> P1/2 line; negative means red.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C, HBAR
from .species import IonSpecies, omega_3half

POLE_TOLERANCE = 1e-6  # in units of omega_f


class PoleError(ValueError):
    """Detuning too close to one of the P1/2 or P3/2 resonances."""


@dataclass(frozen=True)
class BeamConfig:
    power: float  # W, per Raman beam
    waist: float  # m, Gaussian 1/e^2 radius at the ion
    detuning: float | None = None  # rad/s

    def __post_init__(self):
        if not self.power > 0:
            raise ValueError(f"beam power must be positive, got {self.power}")
        if not self.waist > 0:
            raise ValueError(f"beam waist must be positive, got {self.waist}")


def check_detuning(species: IonSpecies, detuning):
    """Reject detunings within ``POLE_TOLERANCE * omega_f`` of either pole.

    Works on scalars and arrays; returns the detuning as a float or ndarray.
    """
    d = np.asarray(detuning, dtype=float)
    tol = POLE_TOLERANCE * species.omega_f
    near = (np.abs(d) < tol) | (np.abs(d - species.omega_f) < tol) | ~np.isfinite(d)
    if np.any(near):
        raise PoleError(
            f"detuning too close to a resonance of {species.name} "
            f"(|Delta| or |Delta - omega_f| < {POLE_TOLERANCE:g} omega_f)"
        )
    return float(d) if d.ndim == 0 else d


def g_squared_from_beam(species: IonSpecies, beam: BeamConfig) -> float:
    """Squared resonant coupling g^2 (rad^2/s^2) at the centre of a Gaussian beam."""
    w3 = omega_3half(species)
    return 3.0 * species.gamma * C**2 * beam.power / (beam.waist**2 * HBAR * w3**3)


def rabi_frequency(g_squared: float, species: IonSpecies, detuning):
    """Signed two-photon Rabi frequency between the clock states.

    Negative between the two fine-structure levels (0 < Delta < omega_f).
    """
    d = check_detuning(species, detuning)
    wf = species.omega_f
    return g_squared / 3.0 * wf / (d * (d - wf))


def pi_time(rabi):
    """Duration of a pi rotation, pi / (2 |Omega_R|)."""
    r = np.abs(np.asarray(rabi, dtype=float))
    if np.any(r == 0):
        raise ValueError("Rabi frequency must be non-zero")
    out = math.pi / (2.0 * r)
    return float(out) if out.ndim == 0 else out


def prob_total_pi(species: IonSpecies, detuning):
    """Probability of any spontaneous scattering event during a pi pulse."""
    d = check_detuning(species, detuning)
    wf = species.omega_f
    return math.pi * species.gamma / wf * (2.0 * d**2 + (d - wf) ** 2) / np.abs(d * (d - wf))


def prob_raman_pi(species: IonSpecies, detuning):
    """Probability of a Raman (state-changing) scattering event during a pi pulse."""
    d = check_detuning(species, detuning)
    wf = species.omega_f
    return 2.0 * math.pi * species.gamma / 3.0 * wf / np.abs(d * (d - wf))


def prob_rayleigh_pi(species: IonSpecies, detuning):
    """Probability of an elastic (Rayleigh) scattering event during a pi pulse."""
    d = check_detuning(species, detuning)
    wf = species.omega_f
    return (
        math.pi * species.gamma / wf * (3.0 * d**2 - 2.0 * d * wf + wf**2 / 3.0) / np.abs(d * (d - wf))
    )


def rate_total(g_squared: float, species: IonSpecies, detuning):
    """Total scattering rate (1/s) from both Raman beams together."""
    d = check_detuning(species, detuning)
    wf = species.omega_f
    return 2.0 * species.gamma * g_squared / 3.0 * (1.0 / d**2 + 2.0 / (d - wf) ** 2)


def rate_raman(g_squared: float, species: IonSpecies, detuning):
    """Raman scattering rate (1/s) back into the S1/2 manifold from both beams."""
    d = check_detuning(species, detuning)
    wf = species.omega_f
    return 4.0 * species.gamma * g_squared / 9.0 * (wf / (d * (d - wf))) ** 2


def prob_total_minimum(species: IonSpecies) -> tuple[float, float]:
    """``(detuning, probability)`` at the global minimum of :func:`prob_total_pi`."""
    wf = species.omega_f
    return (math.sqrt(2.0) - 1.0) * wf, 2.0 * math.sqrt(2.0) * math.pi * species.gamma / wf


def prob_asymptote(species: IonSpecies) -> float:
    """Large-|Delta| limit shared by the total and Rayleigh probabilities."""
    return 3.0 * math.pi * species.gamma / species.omega_f


def raman_inside_minimum(species: IonSpecies) -> float:
    """Smallest Raman probability reachable between the fine-structure levels."""
    return 8.0 * math.pi * species.gamma / (3.0 * species.omega_f)
