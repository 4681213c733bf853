"""Error budget of the two-qubit geometric phase gate.

Four Raman beams (two pairs, each pair crossing at 90 degrees so that the
wave-vector difference, sqrt(2) k_L, lies along the trap axis) drive K loops
in phase space. Relative to a single-qubit pi pulse at the same Rabi
frequency, every scattering probability grows by ``4 sqrt(K) / eta``: two
ions, two Raman fields, and a gate that is ``sqrt(K)/eta`` times longer.

Every function that needs the Lamb-Dicke parameter accepts it explicitly so
tabulated values can be injected; :func:`lamb_dicke` computes it from the
trap frequency and the ion mass.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .budget_single import DetuningRoot, solve_raman_detunings
from .constants import C, HBAR
from .scattering import check_detuning, prob_rayleigh_pi, prob_total_pi
from .species import IonSpecies, omega_3half

LAMB_DICKE_WARN = 0.3


@dataclass(frozen=True)
class TwoQubitGateSpec:
    gate_time: float  # s
    trap_freq: float  # rad/s
    waist: float  # m
    circles: int = 1
    power: Optional[float] = None  # W per beam, four beams

    def __post_init__(self):
        for name in ("gate_time", "trap_freq", "waist"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if int(self.circles) != self.circles or self.circles < 1:
            raise ValueError(f"circles must be a positive integer, got {self.circles}")
        if self.power is not None and not self.power > 0:
            raise ValueError("power must be positive")


@dataclass(frozen=True)
class LambDicke:
    eta: float
    z0: float  # m

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"Lamb-Dicke parameter must lie in (0, 1), got {self.eta}")
        if self.eta > LAMB_DICKE_WARN:
            warnings.warn(
                f"eta = {self.eta:.3f} > {LAMB_DICKE_WARN}: outside the Lamb-Dicke regime",
                stacklevel=3,
            )


def lamb_dicke(species: IonSpecies, trap_freq: float) -> LambDicke:
    """Lamb-Dicke parameter for the gate mode, with Delta k = sqrt(2) k_L.

    ``z0 = sqrt(hbar / (4 M omega_trap))`` is the single-ion ground-state
    spread in a two-ion normal mode.
    """
    if not trap_freq > 0:
        raise ValueError("trap frequency must be positive")
    z0 = math.sqrt(HBAR / (4.0 * species.mass * trap_freq))
    k_laser = 2.0 * math.pi / species.lambda_3half
    return LambDicke(eta=math.sqrt(2.0) * k_laser * z0, z0=z0)


def gate_scale(eta: float, circles: int) -> float:
    """Factor 4 sqrt(K)/eta relating gate to single-pi-pulse probabilities."""
    if not eta > 0:
        raise ValueError("eta must be positive")
    return 4.0 * math.sqrt(circles) / eta


def gate_time_from_rabi(rabi: float, eta: float, circles: int) -> float:
    """Gate duration pi sqrt(K) / (2 |Omega_R| eta)."""
    return math.pi * math.sqrt(circles) / (2.0 * abs(rabi) * eta)


def rabi_for_gate(gate_time: float, eta: float, circles: int) -> float:
    """Carrier Rabi frequency |Omega_R| needed for a given gate time."""
    return math.pi * math.sqrt(circles) / (2.0 * gate_time * eta)


def epsilon_s_gate(species: IonSpecies, spec: TwoQubitGateSpec, eta: Optional[float] = None) -> float:
    """Raman error into S1/2 for the whole gate at power ``spec.power``.

    Without ``eta`` this is the mass/trap-frequency closed form; with an
    injected ``eta`` the single-qubit error at the gate's Rabi frequency is
    scaled by 4 sqrt(K)/eta. Both agree when ``eta`` equals the computed value.
    """
    if spec.power is None:
        raise ValueError("spec.power is required")
    if eta is None:
        return (
            8.0 * math.pi**2 / (3.0 * spec.power)
            * spec.circles / spec.gate_time
            * spec.waist**2 * omega_3half(species) * species.mass * spec.trap_freq
        )
    rabi = rabi_for_gate(spec.gate_time, eta, spec.circles)
    w3 = omega_3half(species)
    single = 2.0 * math.pi * rabi * HBAR * w3**3 * spec.waist**2 / (3.0 * C**2 * spec.power)
    return single * gate_scale(eta, spec.circles)


def power_for_error_gate(
    species: IonSpecies, spec: TwoQubitGateSpec, target_eps_s: float, eta: Optional[float] = None
) -> float:
    """Power per beam (W) giving ``target_eps_s``; ``spec.power`` is ignored."""
    if not 0.0 < target_eps_s < 1.0:
        raise ValueError(f"target error must lie in (0, 1), got {target_eps_s}")
    if eta is None:
        return (
            8.0 * math.pi**2 / (3.0 * target_eps_s)
            * spec.circles / spec.gate_time
            * spec.waist**2 * omega_3half(species) * species.mass * spec.trap_freq
        )
    rabi = rabi_for_gate(spec.gate_time, eta, spec.circles)
    return (
        2.0 * math.pi / (3.0 * target_eps_s)
        * (2.0 * math.pi * spec.waist / species.lambda_3half) ** 2
        * HBAR * omega_3half(species) * rabi
        * gate_scale(eta, spec.circles)
    )


def detunings_for_raman_error_gate(
    species: IonSpecies, eta: float, circles: int, target_eps_s: float
) -> list[DetuningRoot]:
    """Detunings at which the gate's Raman error equals ``target_eps_s``."""
    scale = gate_scale(eta, circles) * 2.0 * math.pi * species.gamma / 3.0
    return solve_raman_detunings(species.omega_f, scale, target_eps_s)


def epsilon_d_gate(species: IonSpecies, detuning, eta: float, circles: int):
    """D-level leakage error accumulated over the gate."""
    f = species.require_d_levels()
    return gate_scale(eta, circles) * f * prob_total_pi(species, detuning)


def epsilon_d_asymptotic_gate(species: IonSpecies, eta: float, circles: int) -> float:
    f = species.require_d_levels()
    return 3.0 * math.pi * species.gamma * f / species.omega_f * gate_scale(eta, circles)


def p_rayleigh_gate(species: IonSpecies, detuning, eta: float, circles: int):
    """Probability that either ion Rayleigh-scatters a photon during the gate."""
    d = check_detuning(species, detuning)
    wf = species.omega_f
    shape = (3.0 * d**2 - 2.0 * d * wf + wf**2 / 3.0) / np.abs(d * (d - wf))
    return 4.0 * math.sqrt(circles) * math.pi * species.gamma / (eta * wf) * shape


def recoil_factor(eta: float, circles: int) -> float:
    """Error per Rayleigh event, <|beta|^2>/(2K) with <|beta|^2> = 5 eta^2 / 12.

    This is the analytic factor used for the tabulated recoil error; the
    Monte Carlo in :mod:`ionscatter.recoil` measures it independently.
    """
    return 5.0 * eta**2 / (24.0 * circles)


def epsilon_r(species: IonSpecies, detuning, eta: float, circles: int):
    """Gate error from Rayleigh-recoil phase-space kicks."""
    d = check_detuning(species, detuning)
    wf = species.omega_f
    shape = (3.0 * d**2 - 2.0 * d * wf + wf**2 / 3.0) / np.abs(d * (d - wf))
    return 5.0 * eta * math.pi * species.gamma / (6.0 * math.sqrt(circles) * wf) * shape


def epsilon_r_over_s(species: IonSpecies, detuning, eta: float, circles: int):
    check_detuning(species, detuning)
    wf = species.omega_f
    return 5.0 * eta**2 / (16.0 * circles) * (3.0 * detuning**2 - 2.0 * detuning * wf + wf**2 / 3.0) / wf**2


def epsilon_r_asymptotic(
    species: IonSpecies, trap_freq: float, circles: int, eta: Optional[float] = None
) -> float:
    """Large-detuning limit of the recoil error.

    With ``eta`` omitted, uses the mass/trap-frequency form directly.
    """
    if eta is None:
        return (
            5.0 * math.pi**2 * species.gamma / (species.omega_f * species.lambda_3half)
            * math.sqrt(HBAR / (2.0 * species.mass * trap_freq * circles))
        )
    return 5.0 * math.pi * eta / (2.0 * math.sqrt(circles)) * species.gamma / species.omega_f


def epsilon_delta(species: IonSpecies, detuning, eta: float, circles: int):
    """Error from the qubit-state dependence of the Rayleigh rate, for the gate.

    Approximates the rate imbalance by omega0/Delta; only meaningful for
    |Delta| >> omega0.
    """
    _warn_small_detuning(species, detuning)
    return (species.omega0 / detuning) ** 2 * p_rayleigh_gate(species, detuning, eta, circles)


def epsilon_delta_single(species: IonSpecies, detuning):
    """Single-qubit counterpart of :func:`epsilon_delta`."""
    _warn_small_detuning(species, detuning)
    return (species.omega0 / detuning) ** 2 * prob_rayleigh_pi(species, detuning)


def _warn_small_detuning(species: IonSpecies, detuning) -> None:
    if np.any(np.abs(np.asarray(detuning)) < 10.0 * species.omega0):
        warnings.warn(
            f"|Delta| < 10 omega0 for {species.name}; the omega0/Delta rate-difference "
            "estimate is unreliable here",
            stacklevel=3,
        )
