import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfris.cfmimo import (CbfPowerCoeffs, CfmmConfig, ZfpPowerCoeffs,
                          cbf_power_control, cbf_rate, draw_zfp_ensemble,
                          zf_precoder, zfp_chi, zfp_chi_matrix,
                          zfp_power_control, zfp_rate)
from cfris.channel import draw_small_scale
from cfris.errors import (ConfigurationError, DegenerateChannelError,
                          SingularChannelError)
from oracle_utils import crandn


def cfg_with(m=1, k=1, pm_over_noise=10.0, samples=50):
    # choose total power so that per-AP power / noise hits the target ratio
    return CfmmConfig(m=m, k=k, total_power_w=pm_over_noise * m,
                      noise_power_w=1.0, expectation_samples=samples)


# --------------------------------------------------------------------- CBF

def test_cbf_power_row_summing_to_one():
    coeffs = cbf_power_control(np.array([[0.3, 0.7]]))
    assert np.allclose(coeffs.eta, 1.0)


def test_cbf_power_scalar_reciprocal():
    assert cbf_power_control(np.array([[4.0]])).eta[0, 0] == 0.25


def test_cbf_power_substitution_identity():
    rng = np.random.default_rng(0)
    alpha = rng.uniform(0.1, 2.0, (5, 3))
    coeffs = cbf_power_control(alpha)
    budget = (coeffs.eta * alpha).sum(axis=1)
    assert np.max(np.abs(budget - 1.0)) < 1e-12


def test_cbf_power_rejects_zero_row():
    with pytest.raises(DegenerateChannelError):
        cbf_power_control(np.array([[0.0, 0.0], [1.0, 1.0]]))


def test_cbf_rate_scalar_oracle():
    cfg = cfg_with(pm_over_noise=10.0)
    alpha = beta = np.array([[1.0]])
    res = cbf_rate(alpha, beta, CbfPowerCoeffs(eta=np.array([[1.0]])), cfg)
    expected = math.log2(1.0 + 1.0 / (0.1 + 1.0))
    assert res.per_user_rate[0] == pytest.approx(expected, rel=1e-12)
    assert res.sum_rate == pytest.approx(expected, rel=1e-12)


def test_cbf_rate_vanishes_with_noise():
    cfg = CfmmConfig(m=1, k=1, total_power_w=1.0, noise_power_w=1e18,
                     expectation_samples=1)
    res = cbf_rate(np.array([[1.0]]), np.array([[1.0]]),
                   CbfPowerCoeffs(eta=np.array([[1.0]])), cfg)
    assert res.per_user_rate[0] < 1e-9


def test_cbf_rate_zero_signal():
    cfg = cfg_with()
    res = cbf_rate(np.zeros((1, 1)), np.ones((1, 1)),
                   CbfPowerCoeffs(eta=np.ones((1, 1))), cfg)
    assert res.per_user_rate[0] == 0.0


def test_cbf_rate_monotone_in_power():
    rng = np.random.default_rng(1)
    alpha = beta = rng.uniform(1e-12, 1e-9, (8, 3))
    coeffs = cbf_power_control(alpha)
    rates = []
    for p in (1.0, 2.0, 8.0):
        cfg = CfmmConfig(m=8, k=3, total_power_w=p, noise_power_w=1e-13,
                         expectation_samples=1)
        rates.append(cbf_rate(alpha, beta, coeffs, cfg).per_user_rate)
    assert np.all(rates[1] > rates[0]) and np.all(rates[2] > rates[1])


# ---------------------------------------------------------------------- ZF

def test_zf_precoder_scalar_inverse():
    w = zf_precoder(np.array([[2.0 + 0.0j]]))
    assert w[0, 0] == pytest.approx(0.5)


def test_zf_precoder_identity_small():
    rng = np.random.default_rng(2)
    g = crandn(rng, (2, 4))
    w = zf_precoder(g)
    assert np.max(np.abs(g @ w - np.eye(2))) < 1e-10


def test_zf_precoder_rejects_duplicate_rows():
    row = crandn(np.random.default_rng(3), (1, 6))
    with pytest.raises(SingularChannelError):
        zf_precoder(np.vstack([row, row]))


def test_zf_precoder_rejects_fat_matrix():
    with pytest.raises(ConfigurationError):
        zf_precoder(crandn(np.random.default_rng(4), (5, 3)))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=64), st.integers(min_value=0, max_value=63),
       st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_zf_identity_property(m, k_offset, seed):
    k = 1 + k_offset % m
    g = crandn(np.random.default_rng(seed), (k, m))
    w = zf_precoder(g)
    assert np.max(np.abs(g @ w - np.eye(k))) < 1e-10


# ------------------------------------------------------------------ ZFP MC

def test_zfp_chi_zero_under_perfect_csi():
    rng = np.random.default_rng(5)
    ensemble = crandn(rng, (20, 2, 6))
    chi = zfp_chi_matrix(ensemble, np.zeros((6, 2)))
    assert np.all(chi == 0.0)


def test_zfp_chi_scalar_oracle():
    ensemble = np.ones((10, 1, 1), dtype=complex)
    chi = zfp_chi(ensemble, np.array([[0.2]]), 0)
    assert chi[0] == pytest.approx(0.2, rel=1e-12)


def test_zfp_chi_non_negative():
    rng = np.random.default_rng(6)
    ensemble = crandn(rng, (30, 3, 8))
    chi = zfp_chi_matrix(ensemble, rng.uniform(0.0, 1.0, (8, 3)))
    assert np.all(chi >= 0.0)


def test_zfp_power_scalar_oracle():
    ensemble = np.full((10, 1, 1), 2.0 + 0.0j)
    coeffs = zfp_power_control(ensemble, cfg_with())
    assert coeffs.delta[0, 0] == pytest.approx(0.25, rel=1e-12)
    assert coeffs.eta[0] == pytest.approx(4.0, rel=1e-12)


def test_zfp_power_homogeneity():
    rng = np.random.default_rng(7)
    ensemble = crandn(rng, (40, 3, 10))
    base = zfp_power_control(ensemble, cfg_with(m=10, k=3))
    scaled = zfp_power_control(3.0 * ensemble, cfg_with(m=10, k=3))
    assert scaled.eta[0] == pytest.approx(9.0 * base.eta[0], rel=1e-9)


def test_zfp_power_substitution_identity():
    rng = np.random.default_rng(8)
    ensemble = crandn(rng, (50, 4, 12))
    coeffs = zfp_power_control(ensemble, cfg_with(m=12, k=4))
    load = (coeffs.delta * coeffs.eta[None, :]).sum(axis=1).max()
    assert load == pytest.approx(1.0, abs=1e-9)


def test_zfp_rate_perfect_csi_oracle():
    cfg = cfg_with(pm_over_noise=10.0)
    coeffs = ZfpPowerCoeffs(eta=np.array([1.0]), delta=np.zeros((1, 1)))
    res = zfp_rate(coeffs, np.zeros((1, 1)), cfg)
    assert res.per_user_rate[0] == pytest.approx(math.log2(11.0), rel=1e-12)


def test_zfp_rate_interference_limits():
    cfg = cfg_with()
    coeffs = ZfpPowerCoeffs(eta=np.array([1.0]), delta=np.zeros((1, 1)))
    assert zfp_rate(coeffs, np.array([[1e12]]), cfg).per_user_rate[0] < 1e-9


def test_zfp_rate_monotone_in_chi():
    cfg = cfg_with(m=2, k=2)
    coeffs = ZfpPowerCoeffs(eta=np.ones(2), delta=np.zeros((2, 2)))
    lo = zfp_rate(coeffs, np.full((2, 2), 0.01), cfg).per_user_rate
    hi = zfp_rate(coeffs, np.full((2, 2), 0.02), cfg).per_user_rate
    assert np.all(hi < lo)


def test_zfp_monotone_in_power():
    rng = np.random.default_rng(9)
    ensemble = crandn(rng, (40, 2, 8))
    chi = zfp_chi_matrix(ensemble, rng.uniform(0, 0.1, (8, 2)))
    rates = []
    for p in (1.0, 4.0):
        cfg = CfmmConfig(m=8, k=2, total_power_w=p, noise_power_w=0.5,
                         expectation_samples=1)
        coeffs = zfp_power_control(ensemble, cfg)
        rates.append(zfp_rate(coeffs, chi, cfg).per_user_rate)
    assert np.all(rates[1] > rates[0])


def test_zfp_estimators_stable_when_doubling_samples():
    rng = np.random.default_rng(10)
    alpha = rng.uniform(1e-12, 1e-9, (30, 4))
    e200, _ = draw_zfp_ensemble(alpha, 200, np.random.default_rng(11))
    e400, _ = draw_zfp_ensemble(alpha, 400, np.random.default_rng(11))
    cfg = CfmmConfig(m=30, k=4, total_power_w=1.0, noise_power_w=1e-13,
                     expectation_samples=200)
    eta200 = zfp_power_control(e200, cfg).eta[0]
    eta400 = zfp_power_control(e400, cfg).eta[0]
    assert abs(eta400 - eta200) / eta200 < 0.05
    chi200 = zfp_chi_matrix(e200, 0.3 * alpha).sum()
    chi400 = zfp_chi_matrix(e400, 0.3 * alpha).sum()
    assert abs(chi400 - chi200) / chi200 < 0.05


def test_draw_ensemble_deterministic_and_scaled():
    alpha = np.array([[1.0, 4.0], [9.0, 16.0]])  # M=2, K=2
    a, ra = draw_zfp_ensemble(alpha, 500, np.random.default_rng(12))
    b, rb = draw_zfp_ensemble(alpha, 500, np.random.default_rng(12))
    assert np.array_equal(a, b) and ra == rb
    var = np.mean(np.abs(a) ** 2, axis=0)  # (K, M)
    assert np.allclose(var, alpha.T, rtol=0.15)


def test_empty_ensemble_rejected():
    with pytest.raises(ConfigurationError):
        zfp_chi_matrix(np.zeros((0, 2, 3)), np.zeros((3, 2)))


def test_config_validation():
    with pytest.raises(ConfigurationError):
        CfmmConfig(m=0, k=1)
    with pytest.raises(ConfigurationError):
        CfmmConfig(m=1, k=1, expectation_samples=0)
    cfg = CfmmConfig(m=4, k=2, total_power_w=20.0, noise_power_w=1.0)
    assert cfg.per_ap_power_w * cfg.m == pytest.approx(20.0)
