"""Cell-free massive MIMO downlink rate bounds.

Two precoders are covered: conjugate beamforming evaluated directly
from channel statistics, and zero forcing evaluated from a Monte Carlo
ensemble of estimated channel matrices.  Both use the full-power
strategy: every AP spends its entire budget on average.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (ConfigurationError, DegenerateChannelError,
                     SingularChannelError)
from .channel import draw_small_scale

COND_LIMIT = 1e8  # estimated channel matrices above this are rejected


@dataclass(frozen=True)
class CfmmConfig:
    """Downlink configuration of the distributed-antenna system."""

    m: int
    k: int
    total_power_w: float = 20.0
    noise_power_w: float = 1e-13
    expectation_samples: int = 200

    def __post_init__(self):
        if self.m < 1 or self.k < 1:
            raise ConfigurationError("m and k must be at least 1")
        if self.total_power_w <= 0 or self.noise_power_w <= 0:
            raise ConfigurationError("powers must be positive")
        if self.expectation_samples < 1:
            raise ConfigurationError("expectation_samples must be at least 1")

    @property
    def per_ap_power_w(self) -> float:
        """Per-antenna budget; the area total is shared by all M antennas."""
        return self.total_power_w / self.m


@dataclass(frozen=True)
class CbfPowerCoeffs:
    """Per-(AP, user) power coefficients, identical across users per AP."""

    eta: np.ndarray  # (M, K)


@dataclass(frozen=True)
class ZfpPowerCoeffs:
    """Common per-user coefficient plus the per-AP load diagnostics."""

    eta: np.ndarray    # (K,) all entries equal
    delta: np.ndarray  # (M, K), delta[m, k] = expected |W[m, k]|^2


@dataclass(frozen=True)
class SchemeResult:
    scheme: str
    per_user_rate: np.ndarray  # (K,) bit/s/Hz

    @property
    def sum_rate(self) -> float:
        return float(self.per_user_rate.sum())


def cbf_power_control(alpha: np.ndarray) -> CbfPowerCoeffs:
    """Full-power coefficients: eta_mk = 1 / sum_k' alpha_mk'.

    Makes every AP's average transmit power exactly its budget.
    """
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha < 0):
        raise ConfigurationError("alpha entries must be non-negative")
    row_sums = alpha.sum(axis=1)
    if np.any(row_sums <= 0):
        raise DegenerateChannelError("an AP sees zero estimate power for every user")
    eta = np.repeat((1.0 / row_sums)[:, None], alpha.shape[1], axis=1)
    return CbfPowerCoeffs(eta=eta)


def cbf_rate(alpha: np.ndarray, beta: np.ndarray, coeffs: CbfPowerCoeffs,
             cfg: CfmmConfig) -> SchemeResult:
    """Conjugate-beamforming rate bound from statistics alone.

    R_k = log2(1 + (sum_m sqrt(eta_mk) alpha_mk)^2
               / (sigma^2/P_m + sum_m sum_i eta_mi beta_mk alpha_mi))
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    eta = coeffs.eta
    num = (np.sqrt(eta) * alpha).sum(axis=0) ** 2
    interference = np.einsum("mi,mk,mi->k", eta, beta, alpha)
    sinr = num / (cfg.noise_power_w / cfg.per_ap_power_w + interference)
    return SchemeResult(scheme="CBF", per_user_rate=np.log2(1.0 + sinr))


def zf_precoder(g_hat: np.ndarray) -> np.ndarray:
    """Right pseudo-inverse of the K x M estimated channel matrix.

    Returns W (M x K) with g_hat @ W = I_K; rejects matrices whose
    2-norm condition number exceeds COND_LIMIT.
    """
    g_hat = np.asarray(g_hat)
    k, m = g_hat.shape
    if k > m:
        raise ConfigurationError("zero forcing requires K <= M")
    sv = np.linalg.svd(g_hat, compute_uv=False)
    if sv[-1] == 0 or sv[0] / sv[-1] > COND_LIMIT:
        raise SingularChannelError(
            f"estimated channel condition number exceeds {COND_LIMIT:g}")
    return np.linalg.pinv(g_hat)


def _ensemble_b(g_hat_ensemble: np.ndarray) -> np.ndarray:
    """(G G^H)^-1 G for each ensemble member; shape (T, K, M)."""
    g = np.asarray(g_hat_ensemble)
    if g.ndim != 3 or g.shape[0] == 0:
        raise ConfigurationError("g_hat_ensemble must be a nonempty (T, K, M) stack")
    gram = g @ np.conj(np.swapaxes(g, 1, 2))
    return np.linalg.solve(gram, g)


def zfp_chi_matrix(g_hat_ensemble: np.ndarray, err_var: np.ndarray) -> np.ndarray:
    """Residual-interference matrix chi with chi[i, k] = chi_k^i.

    chi_k^i averages, over the ensemble, the i-th diagonal entry of
    (G G^H)^-1 G E_k G^H (G G^H)^-1 where E_k is the diagonal matrix of
    per-AP estimation-error variances towards user k.
    """
    b = _ensemble_b(g_hat_ensemble)
    err_var = np.asarray(err_var, dtype=float)
    return np.einsum("tim,mk->ik", np.abs(b) ** 2, err_var) / b.shape[0]


def zfp_chi(g_hat_ensemble: np.ndarray, err_var: np.ndarray, k: int) -> np.ndarray:
    """Length-K residual-interference vector for user ``k``."""
    return zfp_chi_matrix(g_hat_ensemble, err_var)[:, k]


def zfp_power_control(g_hat_ensemble: np.ndarray, cfg: CfmmConfig) -> ZfpPowerCoeffs:
    """Common full-power coefficient for zero forcing.

    delta[m, k] is the expected squared magnitude of precoder entry
    W[m, k]; the common eta is sized so the most loaded AP transmits at
    exactly its budget on average.
    """
    b = _ensemble_b(g_hat_ensemble)
    delta = (np.abs(b) ** 2).mean(axis=0).T  # (M, K)
    eta_value = 1.0 / delta.sum(axis=1).max()
    return ZfpPowerCoeffs(eta=np.full(b.shape[1], eta_value), delta=delta)


def zfp_rate(coeffs: ZfpPowerCoeffs, chi: np.ndarray, cfg: CfmmConfig) -> SchemeResult:
    """Zero-forcing rate bound.

    R_k = log2(1 + eta_k / (sigma^2/P_m + sum_i eta_i chi_k^i)) with
    ``chi`` the (K, K) matrix from :func:`zfp_chi_matrix`.
    """
    eta = np.asarray(coeffs.eta, dtype=float)
    chi = np.asarray(chi, dtype=float)
    denom = cfg.noise_power_w / cfg.per_ap_power_w + eta @ chi
    return SchemeResult(scheme="ZFP", per_user_rate=np.log2(1.0 + eta / denom))


def draw_zfp_ensemble(alpha: np.ndarray, samples: int,
                      rng: np.random.Generator) -> tuple[np.ndarray, int]:
    """Draw ``samples`` estimated channel matrices with variances ``alpha``.

    Members whose condition number exceeds COND_LIMIT are re-drawn; the
    second return value counts those re-draws.
    """
    alpha = np.asarray(alpha, dtype=float)
    m, k = alpha.shape
    scale = np.sqrt(alpha.T)  # (K, M)
    out = scale[None, :, :] * draw_small_scale((samples, k, m), rng)
    redraws = 0
    while True:
        sv = np.linalg.svd(out, compute_uv=False)
        bad = (sv[:, -1] == 0) | (sv[:, 0] / np.maximum(sv[:, -1], 1e-300) > COND_LIMIT)
        n_bad = int(bad.sum())
        if n_bad == 0:
            return out, redraws
        redraws += n_bad
        out[bad] = scale[None, :, :] * draw_small_scale((n_bad, k, m), rng)
