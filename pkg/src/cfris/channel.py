"""Propagation and fading models.

Large-scale gains follow a three-slope urban path-loss law with
log-normal shadowing on every terrestrial link; the BS-RIS link, which
is assumed to enjoy an engineered line of sight, uses a free-space-like
law (shared reference intercept, configurable exponent, no shadowing).
Small-scale fading is i.i.d. unit-variance circularly-symmetric complex
Gaussian.  Distances enter every formula in kilometers.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .scenario import Layout, pairwise_distances


@dataclass(frozen=True)
class PropagationParams:
    """Parameters of the large-scale propagation model."""

    fc_mhz: float = 1900.0       # carrier frequency
    h_tx_m: float = 15.0         # transmit antenna height
    h_rx_m: float = 1.65         # receive antenna height
    d0_km: float = 0.010         # inner slope breakpoint
    d1_km: float = 0.050         # outer slope breakpoint
    shadow_sigma_db: float = 8.0
    fs_exponent: float = 2.5     # exponent of the line-of-sight law

    def __post_init__(self):
        if self.fc_mhz <= 0 or self.h_tx_m <= 0 or self.h_rx_m < 0:
            raise ConfigurationError("carrier frequency and heights must be positive")
        if not 0 < self.d0_km < self.d1_km:
            raise ConfigurationError("breakpoints must satisfy 0 < d0 < d1")
        if self.shadow_sigma_db < 0:
            raise ConfigurationError("shadow_sigma_db must be non-negative")
        if self.fs_exponent <= 0:
            raise ConfigurationError("fs_exponent must be positive")


@dataclass(frozen=True)
class LargeScaleGains:
    """Linear-scale large-scale gains for every link family."""

    ap_ue: np.ndarray    # (M, K)
    bs_ue: np.ndarray    # (K,)  identical for each co-located BS antenna
    bs_ris: np.ndarray   # (S,)  line-of-sight law, no shadowing
    ris_ue: np.ndarray   # (S, K)


@dataclass(frozen=True)
class ChannelRealization:
    """One small-scale draw together with its estimate decomposition.

    ``alpha + err_var == beta`` holds bitwise for every link: the error
    variance is computed as ``beta - q*beta`` and the estimate variance
    as ``beta - err_var``, which is exact in IEEE-754 arithmetic.
    """

    g_true: np.ndarray
    g_hat: np.ndarray
    alpha: np.ndarray    # variance of g_hat
    err_var: np.ndarray  # variance of g_true - g_hat


def reference_intercept_db(params: PropagationParams) -> float:
    """Path-loss intercept (dB) of the urban model at unit distance.

    With the default 1900 MHz / 15 m / 1.65 m parameters this evaluates
    to 140.715 dB.
    """
    fc, htx, hrx = params.fc_mhz, params.h_tx_m, params.h_rx_m
    if fc <= 0 or htx <= 0:
        raise DomainError("carrier frequency and transmit height must be positive")
    return (46.3 + 33.9 * np.log10(fc) - 13.82 * np.log10(htx)
            - (1.1 * np.log10(fc) - 0.7) * hrx + 1.56 * np.log10(fc) - 0.8)


def path_loss_db(d_km, params: PropagationParams):
    """Three-slope path gain in dB (always <= 0 here).

    slope 35 beyond d1, slope 20 between d0 and d1, constant below d0;
    the three branches meet continuously at both breakpoints.
    """
    d = np.asarray(d_km, dtype=float)
    if np.any(d <= 0):
        raise DomainError("distance must be positive")
    p0 = reference_intercept_db(params)
    d0, d1 = params.d0_km, params.d1_km
    mid_const = -p0 - 15.0 * np.log10(d1)
    out = np.where(
        d > d1,
        -p0 - 35.0 * np.log10(d),
        np.where(d > d0,
                 mid_const - 20.0 * np.log10(d),
                 mid_const - 20.0 * np.log10(d0)),
    )
    return out if out.ndim else float(out)


def free_space_gain_db(d_km, params: PropagationParams):
    """Line-of-sight path gain in dB: shared intercept, exponent ``fs_exponent``."""
    d = np.asarray(d_km, dtype=float)
    if np.any(d <= 0):
        raise DomainError("distance must be positive")
    p0 = reference_intercept_db(params)
    out = -p0 - 10.0 * params.fs_exponent * np.log10(d)
    return out if out.ndim else float(out)


def _shadowed_beta(d_km: np.ndarray, params: PropagationParams,
                   rng: np.random.Generator) -> np.ndarray:
    x = rng.normal(0.0, params.shadow_sigma_db, size=np.shape(d_km))
    return 10.0 ** ((path_loss_db(d_km, params) + x) / 10.0)


def draw_large_scale(layout: Layout, params: PropagationParams,
                     rng: np.random.Generator) -> LargeScaleGains:
    """Draw the large-scale gains of all link families for one layout.

    Shadowing is drawn in a fixed family order (AP-UE, BS-UE, RIS-UE) so
    that draws for one family are unaffected by the sizes of the later
    ones.  The BS-RIS family is deterministic given the layout.
    """
    d_ap_ue = pairwise_distances(layout.ap_positions, layout.user_positions) / 1000.0
    d_bs_ue = pairwise_distances(layout.bs_position, layout.user_positions)[0] / 1000.0
    ap_ue = _shadowed_beta(d_ap_ue, params, rng)
    bs_ue = _shadowed_beta(d_bs_ue, params, rng)
    if layout.s > 0:
        d_ris_ue = pairwise_distances(layout.ris_positions, layout.user_positions) / 1000.0
        d_bs_ris = pairwise_distances(layout.bs_position, layout.ris_positions)[0] / 1000.0
        ris_ue = _shadowed_beta(d_ris_ue, params, rng)
        bs_ris = 10.0 ** (np.asarray(free_space_gain_db(d_bs_ris, params)) / 10.0)
    else:
        ris_ue = np.zeros((0, layout.k))
        bs_ris = np.zeros(0)
    return LargeScaleGains(ap_ue=ap_ue, bs_ue=bs_ue, bs_ris=bs_ris, ris_ue=ris_ue)


def draw_small_scale(shape, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. CN(0, 1) tensor: real and imaginary parts ~ N(0, 1/2)."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / np.sqrt(2.0)


def split_variances(beta, csi_quality: float) -> tuple[np.ndarray, np.ndarray]:
    """Split link power into estimate and error variances.

    Returns (alpha, err_var) with alpha ~= q*beta and err_var ~= (1-q)*beta.
    The error variance is computed as ``beta - q*beta`` and alpha as
    ``beta - err_var``; the latter subtraction is exact in IEEE-754, so
    ``alpha + err_var == beta`` holds bitwise for every entry.
    """
    q = float(csi_quality)
    if not 0.0 < q <= 1.0:
        raise ConfigurationError("csi_quality must lie in (0, 1]")
    beta = np.asarray(beta, dtype=float)
    err_var = beta - q * beta
    alpha = beta - err_var
    return alpha, err_var


def estimate_channels(g_true: np.ndarray, beta: np.ndarray, csi_quality: float,
                      rng: np.random.Generator | None = None) -> ChannelRealization:
    """Split true channels into an estimate and an independent error.

    The estimate keeps fraction ``q = csi_quality`` of each link's power:
    g_hat = q*g_true + sqrt(q*(1-q)*beta)*w with w ~ CN(0,1), which makes
    g_hat ~ CN(0, q*beta) and the error g_true - g_hat an independent
    CN(0, (1-q)*beta) term.  q = 1 returns the true channels untouched.
    """
    q = float(csi_quality)
    g_true = np.asarray(g_true)
    beta = np.asarray(beta, dtype=float)
    alpha, err_var = split_variances(beta, q)
    if q == 1.0:
        return ChannelRealization(g_true=g_true, g_hat=g_true,
                                  alpha=alpha, err_var=err_var)
    if rng is None:
        raise ConfigurationError("an rng is required when csi_quality < 1")
    w = draw_small_scale(g_true.shape, rng)
    g_hat = q * g_true + np.sqrt(q * (1.0 - q) * beta) * w
    return ChannelRealization(g_true=g_true, g_hat=g_hat,
                              alpha=alpha, err_var=err_var)
