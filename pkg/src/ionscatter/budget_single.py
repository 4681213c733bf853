"""Error budget of a single-qubit pi rotation driven by a co-propagating Raman pair.

The gate error from Raman scattering is taken to be the Raman scattering
probability itself (the small positive contribution of events that land back
in the qubit manifold is ignored, which makes the estimate an upper bound).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .constants import C, HBAR
from .scattering import BeamConfig, prob_raman_pi, prob_total_pi
from .species import IonSpecies, omega_3half

RED_OUTSIDE = "red-outside"
RED_INSIDE = "red-inside"
BLUE_INSIDE = "blue-inside"
BLUE_OUTSIDE = "blue-outside"


class DetuningRoot(NamedTuple):
    detuning: float  # rad/s
    branch: str


@dataclass(frozen=True)
class SingleQubitGateSpec:
    rabi: float  # rad/s, target |Omega_R|
    beam: BeamConfig

    def __post_init__(self):
        if not self.rabi > 0:
            raise ValueError(f"Rabi frequency must be positive, got {self.rabi}")


@dataclass(frozen=True)
class ErrorBudget:
    detuning: float
    power: float
    epsilon_s: Optional[float] = None
    epsilon_d: Optional[float] = None
    epsilon_delta: Optional[float] = None

    def __post_init__(self):
        for name in ("epsilon_s", "epsilon_d", "epsilon_delta"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} = {value} is outside [0, 1]")


def epsilon_s_single(species: IonSpecies, spec: SingleQubitGateSpec) -> float:
    """Raman error into S1/2 for a pi pulse at the given Rabi frequency and power.

    Independent of detuning and of the fine-structure splitting: the detuning
    is whatever is needed to reach ``spec.rabi`` with ``spec.beam.power``.
    """
    w3 = omega_3half(species)
    beam = spec.beam
    return 2.0 * math.pi * spec.rabi * HBAR * w3**3 * beam.waist**2 / (3.0 * C**2 * beam.power)


def power_for_error_single(
    species: IonSpecies, rabi: float, waist: float, target_eps_s: float
) -> float:
    """Power per beam (W) that gives ``target_eps_s`` at Rabi frequency ``rabi``."""
    if not 0.0 < target_eps_s < 1.0:
        raise ValueError(f"target error must lie in (0, 1), got {target_eps_s}")
    w3 = omega_3half(species)
    return (
        2.0 * math.pi / (3.0 * target_eps_s)
        * (2.0 * math.pi * waist / species.lambda_3half) ** 2
        * HBAR * w3 * abs(rabi)
    )


def solve_raman_detunings(omega_f: float, scale: float, target: float) -> list[DetuningRoot]:
    """Solve ``scale * omega_f / |D (D - omega_f)| = target`` for D.

    Closed-form quadratic on each sign region of D (D - omega_f). Returns the
    two outside roots always, plus the two inside roots when the target lies
    strictly above the in-manifold minimum ``4 scale / omega_f``. Sorted
    ascending.
    """
    if not target > 0:
        raise ValueError(f"target error must be positive, got {target}")
    area = scale * omega_f / target  # |D (D - omega_f)|

    # product of the outside roots is -area; take the large one directly
    outer = 0.5 * (omega_f + math.sqrt(omega_f**2 + 4.0 * area))
    roots = [DetuningRoot(-area / outer, RED_OUTSIDE), DetuningRoot(outer, BLUE_OUTSIDE)]

    disc = omega_f**2 - 4.0 * area
    if disc > 0:
        upper = 0.5 * (omega_f + math.sqrt(disc))
        roots.append(DetuningRoot(area / upper, RED_INSIDE))
        roots.append(DetuningRoot(upper, BLUE_INSIDE))
    return sorted(roots, key=lambda r: r.detuning)


def detunings_for_raman_error(species: IonSpecies, target_eps_s: float) -> list[DetuningRoot]:
    """Detunings at which the pi-pulse Raman probability equals ``target_eps_s``."""
    return solve_raman_detunings(species.omega_f, 2.0 * math.pi * species.gamma / 3.0, target_eps_s)


def red_outside_detuning(roots: list[DetuningRoot]) -> float:
    return next(r.detuning for r in roots if r.branch == RED_OUTSIDE)


def epsilon_d_single(species: IonSpecies, detuning):
    """Error from Raman scattering into the D levels during a pi pulse."""
    f = species.require_d_levels()
    return f * prob_total_pi(species, detuning)


def epsilon_ratio_d_over_s(species: IonSpecies, detuning):
    """Ratio of D-level to S-level Raman error at a given detuning."""
    f = species.require_d_levels()
    prob_raman_pi(species, detuning)  # pole guard
    wf = species.omega_f
    return 1.5 * f * (2.0 * detuning**2 + (detuning - wf) ** 2) / wf**2


def epsilon_d_asymptotic_single(species: IonSpecies) -> float:
    """Large-detuning floor of the D-level error; no laser power removes it."""
    f = species.require_d_levels()
    return 3.0 * math.pi * species.gamma * f / species.omega_f


def single_budget(species: IonSpecies, spec: SingleQubitGateSpec) -> ErrorBudget:
    """Full budget at ``spec.beam.detuning`` (required here)."""
    detuning = spec.beam.detuning
    if detuning is None:
        raise ValueError("the beam detuning is required to evaluate the D-level error")
    eps_d = epsilon_d_single(species, detuning) if species.has_d_levels else None
    return ErrorBudget(
        detuning=detuning,
        power=spec.beam.power,
        epsilon_s=epsilon_s_single(species, spec),
        epsilon_d=eps_d,
    )
