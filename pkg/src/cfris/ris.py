"""RIS-aided downlink: phase alignment, beamforming, and TDMA rates.

Each user owns a time slot; within a slot the surface phases and the
transmit beamformer are optimized alternately.  The phase step has a
closed form (align every reflected path with the direct path), the
beamformer step is the matched filter of the resulting effective
channel, and the alternation provably never decreases the received
channel gain.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DegenerateChannelError

UNIT_MODULUS_TOL = 1e-12


@dataclass(frozen=True)
class RisConfig:
    """BS / surface geometry and optimizer settings."""

    m: int                      # BS antennas
    k: int                      # users
    s: int                      # surfaces
    n_per_surface: int          # elements per surface
    bs_power_w: float = 20.0
    noise_power_w: float = 1e-13
    max_iterations: int = 20
    convergence_tol: float = 1e-6

    def __post_init__(self):
        if self.m < 1 or self.k < 1 or self.s < 0 or self.n_per_surface < 0:
            raise ConfigurationError("counts must be non-negative (m, k >= 1)")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be at least 1")
        if self.bs_power_w < 0 or self.noise_power_w <= 0:
            raise ConfigurationError("powers must be valid")

    @property
    def total_elements(self) -> int:
        return self.s * self.n_per_surface


@dataclass(frozen=True)
class PhaseConfig:
    """Unit-modulus reflection coefficients, one per element."""

    q: np.ndarray  # (N,) complex, |q_n| = 1

    def __post_init__(self):
        if self.q.size and np.max(np.abs(np.abs(self.q) - 1.0)) > UNIT_MODULUS_TOL:
            raise ConfigurationError("reflection coefficients must be unit modulus")


@dataclass(frozen=True)
class RisChannels:
    """Stacked channels of one realization."""

    f: np.ndarray  # (M, K) direct BS-UE vectors, column per user
    h: np.ndarray  # (N, M) surface-stacked BS-to-element matrix
    g: np.ndarray  # (N, K) surface-stacked element-to-UE vectors


@dataclass
class AoTrace:
    objective_per_iteration: list[float] = field(default_factory=list)
    converged: bool = False
    iterations_used: int = 0


def combined_channel(phases: PhaseConfig, ch: RisChannels, k: int) -> np.ndarray:
    """Effective 1 x M channel row g_k^T diag(q) H + f_k^T."""
    direct = ch.f[:, k]
    if phases.q.size == 0:
        return direct.copy()
    return (phases.q * ch.g[:, k]) @ ch.h + direct


def optimize_phases(ch: RisChannels, w: np.ndarray, k: int) -> PhaseConfig:
    """Closed-form phase step for a fixed unit-norm beamformer.

    Rotates every cascaded path onto the phase of the direct path, so
    right after the update |(g^T diag(q) H + f^T) w| equals
    sum_n |g_n (H w)_n| + |f^T w| (the triangle-inequality maximum).
    A blocked direct path (f^T w = 0) leaves the reference phase at 0.
    """
    chi = ch.g[:, k] * (ch.h @ w)
    direct = ch.f[:, k] @ w
    phi0 = np.angle(direct) if direct != 0 else 0.0
    return PhaseConfig(q=np.exp(1j * (phi0 - np.angle(chi))))


def matched_filter(ch: RisChannels, phases: PhaseConfig, k: int) -> np.ndarray:
    """Unit-norm beamformer aligned with the effective channel."""
    c = combined_channel(phases, ch, k)
    norm = np.linalg.norm(c)
    if norm == 0:
        raise DegenerateChannelError("effective channel is zero")
    return c.conj() / norm


def _direct_beamformer(ch: RisChannels, k: int) -> np.ndarray:
    """Matched filter of the direct path; basis vector if it is blocked."""
    direct = ch.f[:, k]
    norm = np.linalg.norm(direct)
    if norm == 0:
        e = np.zeros(ch.f.shape[0], dtype=complex)
        e[0] = 1.0
        return e
    return direct.conj() / norm


def alternating_optimization(ch: RisChannels, k: int, cfg: RisConfig,
                             ) -> tuple[PhaseConfig, np.ndarray, AoTrace]:
    """Alternate phase alignment and matched filtering until convergence.

    The beamformer starts as the matched filter of the direct path.
    The objective (effective channel norm) is non-decreasing across
    iterations; the loop stops once its relative change drops below
    ``cfg.convergence_tol`` or after ``cfg.max_iterations``.
    """
    w = _direct_beamformer(ch, k)
    trace = AoTrace()
    n = ch.h.shape[0]
    phases = PhaseConfig(q=np.ones(0, dtype=complex))
    prev = None
    for _ in range(cfg.max_iterations):
        if n > 0:
            phases = optimize_phases(ch, w, k)
        c = combined_channel(phases, ch, k)
        objective = float(np.linalg.norm(c))
        trace.objective_per_iteration.append(objective)
        trace.iterations_used += 1
        if objective == 0:
            # nothing to beamform towards; keep the direct-path choice
            trace.converged = True
            break
        w = c.conj() / objective
        if n == 0:
            trace.converged = True
            break
        if prev is not None and abs(objective - prev) <= cfg.convergence_tol * prev:
            trace.converged = True
            break
        prev = objective
    return phases, w, trace


def ris_rate(ch: RisChannels, phases: PhaseConfig, w: np.ndarray,
             cfg: RisConfig, k: int) -> float:
    """Per-user TDMA rate: (1/K) log2(1 + ||effective channel||^2 P_d / sigma^2).

    The squared norm is the received SNR factor attained by the matched
    filter, and the 1/K prefactor is the user's time share.
    """
    c = combined_channel(phases, ch, k)
    snr = float(np.linalg.norm(c)) ** 2 * cfg.bs_power_w / cfg.noise_power_w
    return float(np.log2(1.0 + snr) / cfg.k)


def random_phases(n: int, rng: np.random.Generator) -> PhaseConfig:
    """Independent phases uniform on [0, 2*pi)."""
    if n < 0:
        raise ConfigurationError("element count must be non-negative")
    return PhaseConfig(q=np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n)))


def write_trace_csv(trace: AoTrace, path) -> None:
    """Dump one optimization trace as (iteration, objective) CSV rows."""
    lines = ["iteration,objective"]
    lines += [f"{i},{v:.9g}" for i, v in enumerate(trace.objective_per_iteration)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
