"""Monte Carlo campaigns: seeding, trial loop, and summary statistics.

Every random draw comes from a stream derived as
``SeedSequence(campaign_seed, spawn_key=(trial, purpose, ...))``, so a
trial's result depends only on the campaign seed and its own index:
trials can run in any order, on any number of workers, and sweeps that
share a seed reuse identical layouts, shadowing, and direct-path fading
(draws are batched in prefix-stable order), which makes configuration
comparisons common-random-number sharp.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import cfmimo, ris
from .channel import (PropagationParams, draw_large_scale, draw_small_scale,
                      split_variances)
from .errors import ConfigurationError, StatisticsError
from .scenario import AreaSpec, generate_layout

CBF = "CBF"
ZFP = "ZFP"
RIS_OPT = "RIS_OPT"
RIS_RAND = "RIS_RAND"
ALL_SCHEMES = (CBF, ZFP, RIS_OPT, RIS_RAND)

# purpose indices of the per-trial seed tree
_P_LAYOUT = 0
_P_SHADOW = 1
_P_ENSEMBLE = 2
_P_FADING_DIRECT = 3
_P_FADING_RIS = 4
_P_PHASES = 5


@dataclass(frozen=True)
class CampaignConfig:
    """Complete, serializable description of one campaign."""

    schemes: tuple[str, ...] = ALL_SCHEMES
    trials: int = 500
    realizations_per_trial: int = 10
    seed: int = 12345
    m: int = 100
    k: int = 5
    s: int = 5
    n_per_surface: int = 200
    csi_quality: float = 1.0
    expectation_samples: int = 200
    total_power_w: float = 20.0
    side_length: float = 1000.0
    min_separation: float = 10.0
    fc_mhz: float = 1900.0
    h_tx_m: float = 15.0
    h_rx_m: float = 1.65
    d0_km: float = 0.010
    d1_km: float = 0.050
    shadow_sigma_db: float = 8.0
    fs_exponent: float = 2.5
    noise_density_dbm_hz: float = -174.0
    noise_figure_db: float = 9.0
    bandwidth_hz: float = 1e7
    max_iterations: int = 20
    convergence_tol: float = 1e-6

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigurationError("trials must be at least 1")
        if self.realizations_per_trial < 1:
            raise ConfigurationError("realizations_per_trial must be at least 1")
        unknown = set(self.schemes) - set(ALL_SCHEMES)
        if unknown:
            raise ConfigurationError(f"unknown schemes: {sorted(unknown)}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigurationError("schemes must not repeat")
        if not 0.0 < self.csi_quality <= 1.0:
            raise ConfigurationError("csi_quality must lie in (0, 1]")
        if self.bandwidth_hz <= 0:
            raise ConfigurationError("bandwidth_hz must be positive")
        # constructing the sub-configs validates the remaining fields
        self.area()
        self.propagation()
        self.cfmimo_config()
        self.ris_config()

    @property
    def noise_power_w(self) -> float:
        return derive_noise_power(self.noise_density_dbm_hz,
                                  self.noise_figure_db, self.bandwidth_hz)

    def area(self) -> AreaSpec:
        return AreaSpec(side_length=self.side_length,
                        min_separation=self.min_separation)

    def propagation(self) -> PropagationParams:
        return PropagationParams(fc_mhz=self.fc_mhz, h_tx_m=self.h_tx_m,
                                 h_rx_m=self.h_rx_m, d0_km=self.d0_km,
                                 d1_km=self.d1_km,
                                 shadow_sigma_db=self.shadow_sigma_db,
                                 fs_exponent=self.fs_exponent)

    def cfmimo_config(self) -> cfmimo.CfmmConfig:
        return cfmimo.CfmmConfig(m=self.m, k=self.k,
                                 total_power_w=self.total_power_w,
                                 noise_power_w=self.noise_power_w,
                                 expectation_samples=self.expectation_samples)

    def ris_config(self) -> ris.RisConfig:
        return ris.RisConfig(m=self.m, k=self.k, s=self.s,
                             n_per_surface=self.n_per_surface,
                             bs_power_w=self.total_power_w,
                             noise_power_w=self.noise_power_w,
                             max_iterations=self.max_iterations,
                             convergence_tol=self.convergence_tol)


@dataclass
class RateSamples:
    """Per-(scheme, trial, realization, user) rate grid plus diagnostics."""

    rates: dict[str, np.ndarray]  # scheme -> (trials, realizations, K)
    redraws: int = 0

    def pooled(self, scheme: str) -> np.ndarray:
        return self.rates[scheme].ravel()

    def sum_samples(self, scheme: str) -> np.ndarray:
        """Per-realization sum throughput samples."""
        return self.rates[scheme].sum(axis=2).ravel()


@dataclass(frozen=True)
class SchemeStats:
    p05: float
    median: float
    mean_sum_throughput: float
    samples: int


def derive_noise_power(density_dbm_hz: float, noise_figure_db: float,
                       bandwidth_hz: float) -> float:
    """Receiver noise power in watts over the signal bandwidth."""
    if bandwidth_hz <= 0:
        raise ConfigurationError("bandwidth must be positive")
    total_dbm = density_dbm_hz + noise_figure_db + 10.0 * np.log10(bandwidth_hz)
    return float(10.0 ** ((total_dbm - 30.0) / 10.0))


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


@dataclass
class TrialResult:
    trial_index: int
    rates: dict[str, np.ndarray]  # scheme -> (realizations, K)
    redraws: int = 0


def run_trial(cfg: CampaignConfig, trial_index: int) -> TrialResult:
    """Evaluate every enabled scheme on one random drop.

    The CBF and ZFP bounds depend only on per-layout statistics, so
    their value is computed once and replicated over the realization
    axis; RIS rates are re-evaluated per small-scale realization.
    """
    t = trial_index
    k, r_per = cfg.k, cfg.realizations_per_trial
    layout = generate_layout(cfg.area(), cfg.m, cfg.k, cfg.s,
                             _stream(cfg.seed, t, _P_LAYOUT),
                             h_tx_m=cfg.h_tx_m, h_rx_m=cfg.h_rx_m)
    gains = draw_large_scale(layout, cfg.propagation(),
                             _stream(cfg.seed, t, _P_SHADOW))
    alpha, err_var = split_variances(gains.ap_ue, cfg.csi_quality)

    rates: dict[str, np.ndarray] = {}
    redraws = 0
    mimo_cfg = cfg.cfmimo_config()

    if CBF in cfg.schemes:
        coeffs = cfmimo.cbf_power_control(alpha)
        per_user = cfmimo.cbf_rate(alpha, gains.ap_ue, coeffs, mimo_cfg).per_user_rate
        rates[CBF] = np.broadcast_to(per_user, (r_per, k)).copy()

    if ZFP in cfg.schemes:
        ensemble, n_redraw = cfmimo.draw_zfp_ensemble(
            alpha, cfg.expectation_samples, _stream(cfg.seed, t, _P_ENSEMBLE))
        redraws += n_redraw
        coeffs = cfmimo.zfp_power_control(ensemble, mimo_cfg)
        chi = cfmimo.zfp_chi_matrix(ensemble, err_var)
        per_user = cfmimo.zfp_rate(coeffs, chi, mimo_cfg).per_user_rate
        rates[ZFP] = np.broadcast_to(per_user, (r_per, k)).copy()

    want_opt = RIS_OPT in cfg.schemes
    want_rand = RIS_RAND in cfg.schemes
    if want_opt or want_rand:
        ris_cfg = cfg.ris_config()
        n_s, n_total = cfg.n_per_surface, cfg.s * cfg.n_per_surface
        opt = np.zeros((r_per, k)) if want_opt else None
        rand = np.zeros((r_per, k)) if want_rand else None
        for r in range(r_per):
            f = (np.sqrt(gains.bs_ue)[None, :]
                 * draw_small_scale((cfg.m, k), _stream(cfg.seed, t, _P_FADING_DIRECT, r)))
            h = np.empty((n_total, cfg.m), dtype=complex)
            g = np.empty((n_total, k), dtype=complex)
            for s in range(cfg.s):
                rows = slice(s * n_s, (s + 1) * n_s)
                h[rows] = np.sqrt(gains.bs_ris[s]) * draw_small_scale(
                    (n_s, cfg.m), _stream(cfg.seed, t, _P_FADING_RIS, r, s, 0))
                g[rows] = np.sqrt(gains.ris_ue[s])[None, :] * draw_small_scale(
                    (n_s, k), _stream(cfg.seed, t, _P_FADING_RIS, r, s, 1))
            channels = ris.RisChannels(f=f, h=h, g=g)
            for user in range(k):
                if want_opt:
                    phases, w, _ = ris.alternating_optimization(channels, user, ris_cfg)
                    opt[r, user] = ris.ris_rate(channels, phases, w, ris_cfg, user)
                if want_rand:
                    phases = ris.random_phases(
                        n_total, _stream(cfg.seed, t, _P_PHASES, r, user))
                    w = ris.matched_filter(channels, phases, user)
                    rand[r, user] = ris.ris_rate(channels, phases, w, ris_cfg, user)
        if want_opt:
            rates[RIS_OPT] = opt
        if want_rand:
            rates[RIS_RAND] = rand

    return TrialResult(trial_index=t, rates=rates, redraws=redraws)


def _trial_task(args: tuple[CampaignConfig, int]) -> TrialResult:
    return run_trial(*args)


def run_campaign(cfg: CampaignConfig, workers: int = 1) -> RateSamples:
    """Run all trials and assemble the rate grid.

    The result is bitwise independent of ``workers``: trials are pure
    functions of (seed, index) and are reassembled in index order.
    """
    if workers < 1:
        raise ConfigurationError("workers must be at least 1")
    if workers == 1 or cfg.trials == 1:
        results = [run_trial(cfg, t) for t in range(cfg.trials)]
    else:
        tasks = [(cfg, t) for t in range(cfg.trials)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_task, tasks,
                                    chunksize=max(1, cfg.trials // (4 * workers))))
    results.sort(key=lambda r: r.trial_index)
    rates = {
        scheme: np.stack([r.rates[scheme] for r in results])
        for scheme in cfg.schemes
    }
    return RateSamples(rates=rates, redraws=sum(r.redraws for r in results))


def percentile(samples, p: float) -> float:
    """Empirical quantile with linear interpolation on order statistics.

    Sample i (0-based, sorted, n samples) sits at plotting position
    i/(n-1); the quantile interpolates linearly between the two
    bracketing samples.  A single sample is returned for any p.
    """
    a = np.sort(np.asarray(samples, dtype=float).ravel())
    if a.size == 0:
        raise StatisticsError("percentile of an empty sample set")
    if not 0.0 < p < 1.0:
        raise ConfigurationError("p must lie strictly between 0 and 1")
    if a.size == 1:
        return float(a[0])
    pos = p * (a.size - 1)
    lo = int(np.floor(pos))
    hi = min(lo + 1, a.size - 1)
    frac = pos - lo
    return float(a[lo] + frac * (a[hi] - a[lo]))


def summarize(samples: RateSamples) -> dict[str, SchemeStats]:
    """Pool each scheme's per-user rates and reduce to summary statistics."""
    if not samples.rates:
        raise StatisticsError("no schemes were simulated")
    out = {}
    for scheme, grid in samples.rates.items():
        pooled = grid.ravel()
        if pooled.size == 0:
            raise StatisticsError(f"no samples for scheme {scheme}")
        out[scheme] = SchemeStats(
            p05=percentile(pooled, 0.05),
            median=percentile(pooled, 0.5),
            mean_sum_throughput=float(samples.sum_samples(scheme).mean()),
            samples=int(pooled.size),
        )
    return out
