import math

import numpy as np
import pytest

from cfris import experiment
from cfris.channel import draw_large_scale, split_variances
from cfris.errors import ConfigurationError, StatisticsError
from cfris.experiment import (ALL_SCHEMES, CBF, RIS_OPT, RIS_RAND, ZFP,
                              CampaignConfig, RateSamples, derive_noise_power,
                              percentile, run_campaign, run_trial, summarize)
from cfris.scenario import generate_layout


def tiny_config(**kw):
    base = dict(trials=3, realizations_per_trial=2, m=12, k=3, s=2,
                n_per_surface=6, expectation_samples=40, seed=321)
    base.update(kw)
    return CampaignConfig(**base)


# ------------------------------------------------------------------ noise

def test_noise_power_paper_values():
    w = derive_noise_power(-174.0, 9.0, 1e7)
    assert w == pytest.approx(3.162277660168379e-13, rel=1e-3)


def test_noise_power_unit_bandwidth():
    w = derive_noise_power(-174.0, 0.0, 1.0)
    assert w == pytest.approx(10.0 ** ((-174.0 - 30.0) / 10.0), rel=1e-12)


def test_noise_power_three_db_step():
    ratio = derive_noise_power(-174, 12, 1e7) / derive_noise_power(-174, 9, 1e7)
    assert ratio == pytest.approx(10.0 ** 0.3, rel=1e-12)
    assert ratio == pytest.approx(2.0, rel=5e-3)


# ------------------------------------------------------------------ trial

def test_run_trial_deterministic():
    cfg = tiny_config()
    a = run_trial(cfg, 1)
    b = run_trial(cfg, 1)
    assert a.rates.keys() == b.rates.keys()
    for scheme in a.rates:
        assert np.array_equal(a.rates[scheme], b.rates[scheme])


def test_run_trial_differs_across_indices():
    cfg = tiny_config()
    a, b = run_trial(cfg, 0), run_trial(cfg, 1)
    assert not np.array_equal(a.rates[CBF], b.rates[CBF])


def test_empty_scheme_set_is_vacuous():
    cfg = tiny_config(schemes=())
    result = run_trial(cfg, 0)
    assert result.rates == {}
    samples = run_campaign(cfg)
    assert samples.rates == {}


def test_rates_non_negative_and_shaped():
    cfg = tiny_config()
    samples = run_campaign(cfg)
    for scheme in ALL_SCHEMES:
        grid = samples.rates[scheme]
        assert grid.shape == (3, 2, 3)
        assert np.all(grid >= 0.0)


def test_scheme_values_independent_of_other_schemes():
    full = run_campaign(tiny_config())
    solo = run_campaign(tiny_config(schemes=(ZFP,)))
    assert np.array_equal(full.rates[ZFP], solo.rates[ZFP])


def test_single_link_cbf_matches_hand_formula():
    cfg = tiny_config(schemes=(CBF,), m=1, k=1, s=0, n_per_surface=0,
                      trials=1, realizations_per_trial=1)
    result = run_trial(cfg, 0)
    # rebuild the trial's large-scale gain through the same seeded streams
    layout = generate_layout(cfg.area(), 1, 1, 0,
                             experiment._stream(cfg.seed, 0, 0))
    gains = draw_large_scale(layout, cfg.propagation(),
                             experiment._stream(cfg.seed, 0, 1))
    beta = gains.ap_ue[0, 0]
    pm = cfg.total_power_w / cfg.m
    eta = 1.0 / beta
    sinr = (math.sqrt(eta) * beta) ** 2 / (cfg.noise_power_w / pm + eta * beta * beta)
    assert result.rates[CBF][0, 0] == pytest.approx(math.log2(1 + sinr), rel=1e-12)


def test_optimized_phases_dominate_random_per_sample():
    samples = run_campaign(tiny_config(schemes=(RIS_OPT, RIS_RAND)))
    assert np.all(samples.rates[RIS_OPT] >= samples.rates[RIS_RAND])


# ------------------------------------------------------------- campaign

def test_campaign_bitwise_identical_across_worker_counts():
    cfg = tiny_config()
    solo = run_campaign(cfg, workers=1)
    multi = run_campaign(cfg, workers=2)
    for scheme in ALL_SCHEMES:
        assert np.array_equal(solo.rates[scheme], multi.rates[scheme])
    assert solo.redraws == multi.redraws


def test_campaign_redraw_counter_small():
    samples = run_campaign(tiny_config())
    assert samples.redraws <= 0.01 * 3 * 2 * 40


# ----------------------------------------------------------- statistics

def test_percentile_linear_interpolation_convention():
    assert percentile(np.arange(1.0, 101.0), 0.05) == pytest.approx(5.95, abs=1e-12)


def test_percentile_single_sample():
    for p in (0.05, 0.5, 0.99):
        assert percentile([7.25], p) == 7.25


def test_percentile_midpoint():
    assert percentile([1.0, 3.0], 0.5) == 2.0


def test_percentile_unsorted_input():
    assert percentile([3.0, 1.0, 2.0], 0.5) == 2.0


def test_percentile_monotone_in_p():
    rng = np.random.default_rng(0)
    samples = rng.exponential(1.0, 500)
    grid = [percentile(samples, p) for p in np.linspace(0.01, 0.99, 50)]
    assert np.all(np.diff(grid) >= 0.0)


def test_percentile_errors():
    with pytest.raises(StatisticsError):
        percentile([], 0.5)
    with pytest.raises(ConfigurationError):
        percentile([1.0], 0.0)
    with pytest.raises(ConfigurationError):
        percentile([1.0], 1.0)


def test_summarize_sums_one_realization():
    samples = RateSamples(rates={CBF: np.array([[[1.0, 2.0, 3.0]]])})
    stats = summarize(samples)[CBF]
    assert stats.mean_sum_throughput == 6.0
    assert stats.samples == 3


def test_summarize_constant_distribution():
    samples = RateSamples(rates={ZFP: np.full((4, 2, 3), 1.5)})
    stats = summarize(samples)[ZFP]
    assert stats.p05 == stats.median == 1.5


def test_summarize_exchangeable_users_sum_identity():
    samples = run_campaign(tiny_config())
    stats = summarize(samples)
    for scheme in ALL_SCHEMES:
        pooled_mean = samples.pooled(scheme).mean()
        assert stats[scheme].mean_sum_throughput == pytest.approx(
            3 * pooled_mean, rel=1e-9)


def test_summarize_empty_errors():
    with pytest.raises(StatisticsError):
        summarize(RateSamples(rates={}))


def test_percentile_not_above_median_in_summary():
    stats = summarize(run_campaign(tiny_config()))
    for s in stats.values():
        assert s.p05 <= s.median


# ------------------------------------------------------------- config

def test_campaign_config_validation():
    with pytest.raises(ConfigurationError):
        tiny_config(trials=0)
    with pytest.raises(ConfigurationError):
        tiny_config(schemes=("CBF", "BAD"))
    with pytest.raises(ConfigurationError):
        tiny_config(schemes=("CBF", "CBF"))
    with pytest.raises(ConfigurationError):
        tiny_config(csi_quality=0.0)
    with pytest.raises(ConfigurationError):
        tiny_config(bandwidth_hz=0.0)


def test_noise_power_derived_from_config():
    cfg = tiny_config()
    assert cfg.noise_power_w == derive_noise_power(-174.0, 9.0, 1e7)


def test_imperfect_csi_lowers_zfp():
    perfect = summarize(run_campaign(tiny_config(schemes=(ZFP,))))
    rough = summarize(run_campaign(tiny_config(schemes=(ZFP,), csi_quality=0.8)))
    assert rough[ZFP].median < perfect[ZFP].median


def test_split_variances_reused_by_trials():
    # alpha + err_var must reconstruct beta bitwise at campaign scale too
    cfg = tiny_config(csi_quality=0.3)
    layout = generate_layout(cfg.area(), cfg.m, cfg.k, cfg.s,
                             experiment._stream(cfg.seed, 0, 0))
    gains = draw_large_scale(layout, cfg.propagation(),
                             experiment._stream(cfg.seed, 0, 1))
    alpha, err = split_variances(gains.ap_ue, 0.3)
    assert np.array_equal(alpha + err, gains.ap_ue)
