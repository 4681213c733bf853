"""Phase-space model of the geometric phase gate with a Rayleigh recoil kick.

Conventions: in the frame rotating at the mode frequency the drive moves the
|up,down> component along ``alpha(t) = (i / 2 sqrt(K)) (exp(-i delta t) - 1)
exp(i Phi_L)``; |down,up> follows ``-alpha(t)``; parallel spins stay put.
Displacements compose as D(a) D(b) = D(a + b) exp(i Im(a b*)).

A recoil is a momentum kick along the trap axis. The absorbed photon comes
from a beam at 45 degrees to the axis (axial projection +-k_L/sqrt(2)) and
the emitted photon goes in an isotropic random direction, so the kick in
units of the ground-state spread is ``(eta/2) (s - sqrt(2) cos(theta))``
with s = +-1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import roots_legendre

SQRT2 = math.sqrt(2.0)
MIN_TRAP_TO_DELTA = 10.0


@dataclass(frozen=True)
class TrajectoryConfig:
    circles: int
    delta: float  # rad/s, detuning from the motional sideband
    trap_freq: float  # rad/s
    eta: float
    gate_phase: float = 0.0  # rad

    def __post_init__(self):
        if int(self.circles) != self.circles or self.circles < 1:
            raise ValueError("circles must be a positive integer")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not self.trap_freq >= MIN_TRAP_TO_DELTA * self.delta:
            raise ValueError(f"trap_freq / delta must be at least {MIN_TRAP_TO_DELTA:g}")
        if not self.eta >= 0:
            raise ValueError("eta must be non-negative")

    @property
    def gate_time(self) -> float:
        return 2.0 * math.pi * self.circles / self.delta

    @property
    def max_recoil(self) -> float:
        return 0.5 * self.eta * (1.0 + SQRT2)


@dataclass(frozen=True)
class RecoilSample:
    t_scat: float
    beta: complex


@dataclass(frozen=True)
class TwoQubitState:
    """Amplitudes on |uu>, |ud>, |du>, |dd> (rotated basis)."""

    mu: complex
    kappa: complex
    gamma: complex
    delta: complex

    def __post_init__(self):
        if abs(self.norm() - 1.0) > 1e-12:
            raise ValueError(f"state is not normalised (norm {self.norm():.15g})")

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes()))

    def amplitudes(self) -> np.ndarray:
        return np.array([self.mu, self.kappa, self.gamma, self.delta], dtype=complex)


def _check_times(t, config: TrajectoryConfig) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    tau = config.gate_time
    slack = 1e-12 * tau
    if np.any((t < -slack) | (t > tau + slack)):
        raise ValueError(f"time outside the gate [0, {tau:g}] s")
    return t


def drive_displacement(t, config: TrajectoryConfig):
    """Cumulative drive displacement alpha(t) of the |up,down> component."""
    t = _check_times(t, config)
    alpha = (
        0.5j / math.sqrt(config.circles)
        * (np.exp(-1j * config.delta * t) - 1.0)
        * np.exp(1j * config.gate_phase)
    )
    return complex(alpha) if alpha.ndim == 0 else alpha


def drive_steps(config: TrajectoryConfig, n_steps: int) -> np.ndarray:
    """The drive split into ``n_steps`` equal-time displacement increments."""
    t = np.linspace(0.0, config.gate_time, n_steps + 1)
    return np.diff(drive_displacement(t, config))


def compose_displacements(steps: Sequence[complex]) -> tuple[complex, float]:
    """Net displacement and geometric phase of an ordered product of displacements.

    ``steps[0]`` acts first. The phase is ``Im(sum_{j>l} a_j conj(a_l))``.
    """
    a = np.asarray(steps, dtype=complex)
    if a.size == 0:
        return 0j, 0.0
    before = np.concatenate(([0j], np.cumsum(a)[:-1]))
    return complex(a.sum()), float(np.sum((a * before.conj()).imag))


def recoil_displacement(config: TrajectoryConfig, t_scat, cos_theta, axial_sign=1):
    """Rotating-frame recoil kick beta for given emission angle and absorbing beam.

    ``axial_sign`` picks which of the two 45-degree beam projections (+-1)
    supplied the absorbed photon.
    """
    q = 0.5 * config.eta * (np.asarray(axial_sign) - SQRT2 * np.asarray(cos_theta))
    beta = 1j * q * np.exp(1j * config.trap_freq * np.asarray(t_scat, dtype=float))
    return complex(beta) if np.ndim(beta) == 0 else beta


def sample_recoil(config: TrajectoryConfig, t_scat: float, rng: np.random.Generator) -> RecoilSample:
    """Draw one recoil at time ``t_scat`` with isotropic emission."""
    _check_times(t_scat, config)
    cos_theta = rng.uniform(-1.0, 1.0)
    sign = 1 if rng.random() < 0.5 else -1
    return RecoilSample(float(t_scat), recoil_displacement(config, t_scat, cos_theta, sign))


def phase_error(beta, t_scat, config: TrajectoryConfig):
    """Gate-phase error of the |up,down> component for a kick ``beta`` at ``t_scat``.

    The |down,up> component picks up the negative of this.
    """
    alpha = drive_displacement(t_scat, config)
    beta = np.asarray(beta, dtype=complex)
    dphi = (beta * np.conj(alpha) - np.conj(beta) * alpha).imag
    return float(dphi) if np.ndim(dphi) == 0 else dphi


def gate_unitary(phi: float, dphi: float = 0.0) -> np.ndarray:
    """Diagonal two-qubit phase gate with antisymmetric phase error ``dphi``."""
    return np.diag(
        [1.0, np.exp(1j * (phi + dphi)), np.exp(1j * (phi - dphi)), 1.0]
    ).astype(complex)


def state_fidelity(state: TwoQubitState, dphi: float) -> float:
    """Overlap fidelity between the erroneous and ideal gate outputs."""
    p = np.abs(state.amplitudes()) ** 2
    overlap = p[0] + np.exp(1j * dphi) * p[1] + np.exp(-1j * dphi) * p[2] + p[3]
    return float(abs(overlap) ** 2)


@dataclass(frozen=True)
class MCResult:
    error_per_scatter: float
    stderr: float
    beta_sq_mean: float
    max_abs_beta: float
    n_samples: int


def _chunk_sizes(n_samples: int, n_chunks: int) -> list[int]:
    base, extra = divmod(n_samples, n_chunks)
    return [base + (1 if i < extra else 0) for i in range(n_chunks)]


def _run_chunk(config: TrajectoryConfig, seed: int, index: int, size: int) -> tuple:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    # (0, tau]: exact t = 0 excluded
    t = config.gate_time * (1.0 - rng.random(size))
    cos_theta = rng.uniform(-1.0, 1.0, size)
    sign = np.where(rng.random(size) < 0.5, 1.0, -1.0)
    beta = recoil_displacement(config, t, cos_theta, sign)
    err = np.sin(phase_error(beta, t, config)) ** 2
    beta_sq = np.abs(beta) ** 2
    return err.sum(), (err**2).sum(), beta_sq.sum(), float(np.sqrt(beta_sq.max(initial=0.0)))


def mc_rayleigh_error(
    config: TrajectoryConfig,
    n_samples: int,
    seed: int,
    n_chunks: int = 16,
    workers: int = 1,
) -> MCResult:
    """Monte Carlo estimate of the gate error per Rayleigh event, 1 - <cos^2 dphi>.

    Scattering time is uniform over the gate, emission isotropic. Chunk ``i``
    draws from its own stream seeded by ``(seed, i)`` and partial sums are
    reduced in chunk order, so the result depends only on
    ``(seed, n_samples, n_chunks)`` and not on ``workers``.
    """
    if n_samples < 1000:
        raise ValueError("n_samples must be at least 1000")
    if n_chunks < 1 or n_chunks > n_samples:
        raise ValueError("n_chunks must lie in [1, n_samples]")
    sizes = _chunk_sizes(n_samples, n_chunks)
    jobs = [(config, seed, i, size) for i, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _run_chunk(*job), jobs))
    else:
        parts = [_run_chunk(*job) for job in jobs]

    err_sum = err_sq_sum = beta_sq_sum = 0.0
    max_beta = 0.0
    for e, e2, b2, bmax in parts:
        err_sum += e
        err_sq_sum += e2
        beta_sq_sum += b2
        max_beta = max(max_beta, bmax)

    n = n_samples
    mean = err_sum / n
    var = max(err_sq_sum / n - mean**2, 0.0) * n / (n - 1)
    return MCResult(
        error_per_scatter=mean,
        stderr=math.sqrt(var / n),
        beta_sq_mean=beta_sq_sum / n,
        max_abs_beta=max_beta,
        n_samples=n,
    )


def _direction_time_grid(config: TrajectoryConfig, n_directions: int, n_times: int):
    cos_theta, w_dir = roots_legendre(n_directions)
    t = (np.arange(n_times) + 0.5) * config.gate_time / n_times
    signs = np.array([1.0, -1.0])
    S, T, U = np.meshgrid(signs, t, cos_theta, indexing="ij")
    W = np.broadcast_to(w_dir, U.shape) / (2.0 * 2.0 * n_times)
    return S.ravel(), T.ravel(), U.ravel(), W.ravel()


def dephasing_equivalence(
    config: TrajectoryConfig, n_directions: int, n_times: int = 64
) -> tuple[float, float]:
    """Single-ion fidelity after one scattering event, computed two ways.

    The ion starts in (|up> + |down>)/sqrt(2) in the motional ground state and
    the spin components follow +-alpha(t). The grid is Gauss-Legendre in the
    emission cos(theta), midpoints in scattering time, and both absorbing-beam
    signs.

    Returns ``(fidelity_mixture, fidelity_dephasing)``: the first from the
    spin density matrix left after tracing out the photon and the motion, the
    second by averaging the pure-state fidelity of a randomly dephased spin.
    """
    sign, t, cos_theta, w = _direction_time_grid(config, n_directions, n_times)
    alpha = drive_displacement(t, config)
    beta = recoil_displacement(config, t, cos_theta, sign)
    dphi = (alpha * np.conj(beta) - np.conj(alpha) * beta).imag

    ideal = np.array([1.0, 1.0], dtype=complex) / SQRT2

    coherence = np.sum(w * np.exp(-2j * dphi))
    rho = np.array([[0.5, 0.5 * coherence], [0.5 * np.conj(coherence), 0.5]], dtype=complex)
    f_mixture = float((ideal.conj() @ rho @ ideal).real)

    states = np.stack([np.exp(-1j * dphi), np.exp(1j * dphi)], axis=1) / SQRT2
    overlaps = np.abs(states @ ideal.conj()) ** 2
    f_dephasing = float(np.sum(w * overlaps))
    return f_mixture, f_dephasing
