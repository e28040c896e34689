"""Tests for the binary-decision error-probability kernel."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from zzbound.models import (
    AssumedModel,
    DenseCov,
    DiagonalCov,
    GaussianNoise,
    LinearVectorMap,
    MixtureNoise,
    ScaledIdentityCov,
    TrueModel,
)
from zzbound.pe_kernel import (
    PeKernel,
    _q_or_limit,
    compute_S,
    equal_linear_scalar_profile,
    pe_equal_linear,
    pe_gaussian,
    pe_general_mc,
    pe_mixture,
    projected_noise_stats,
)
from zzbound.special_math import q_function


def _scalar_kernel(k=1, sigma2=1.0, sigma2_true=None, mu=0.0, mu_true=0.0, hvec=None):
    h = np.ones(k) if hvec is None else np.asarray(hvec, dtype=float)
    sig = LinearVectorMap(h)
    assumed = AssumedModel(sig, np.full(h.size, mu), ScaledIdentityCov(sigma2, h.size))
    true_cov = ScaledIdentityCov(sigma2_true if sigma2_true else sigma2, h.size)
    truth = TrueModel(sig, GaussianNoise(np.full(h.size, mu_true), true_cov))
    return PeKernel(assumed, truth)


def test_compute_s_frozen_value():
    # K = 1, h = 1, sigma^2 = 1, mu = 0: evaluating at theta_eval = 0 leaves
    # only the quadratic term, (h1^2 - h0^2) / 2 = (9 - 4) / 2.
    kern = _scalar_kernel()
    assert compute_S(kern, 0.0, 2.0, 1.0) == pytest.approx(2.5, rel=1e-15)


def test_compute_s_at_candidates_symbolic():
    # For equal maps and mean-zero assumed noise, S at the first candidate is
    # +delta' H' S^-1 H delta / 2 and at the second candidate the negative.
    rng = np.random.default_rng(2)
    for _ in range(5):
        k = 4
        h = rng.standard_normal(k)
        a = rng.standard_normal((k, k))
        cov = DenseCov(a @ a.T + k * np.eye(k))
        sig = LinearVectorMap(h)
        kern = PeKernel(
            AssumedModel(sig, np.zeros(k), cov),
            TrueModel(sig, GaussianNoise(np.zeros(k), cov)),
        )
        theta_o = float(rng.uniform(-3.0, 3.0))
        delta = float(rng.uniform(-2.0, 2.0))
        half_quad = 0.5 * delta * delta * cov.qf_inv(h)
        assert compute_S(kern, theta_o, theta_o, delta) == pytest.approx(
            half_quad, rel=1e-11
        )
        assert compute_S(kern, theta_o + delta, theta_o, delta) == pytest.approx(
            -half_quad, rel=1e-11
        )


def test_q_or_limit_degenerate_spread():
    assert _q_or_limit(-1.0, 0.0) == 1.0
    assert _q_or_limit(1.0, 0.0) == 0.0
    assert _q_or_limit(0.0, 0.0) == 0.5
    assert _q_or_limit(1.0, 2.0) == pytest.approx(float(q_function(0.5)))


def test_pe_gaussian_zero_delta_is_half():
    kern = _scalar_kernel(k=3, sigma2=0.7, mu_true=0.4)
    assert pe_gaussian(kern, 1.3, 0.0) == 0.5


def test_pe_gaussian_full_match_closed_form():
    # Matched models: Pe(delta) = Q(|delta| sqrt(h' S^-1 h) / 2), decreasing.
    rng = np.random.default_rng(4)
    k = 5
    h = rng.standard_normal(k)
    diag = rng.uniform(0.5, 2.0, size=k)
    sig = LinearVectorMap(h)
    kern = PeKernel(
        AssumedModel(sig, np.zeros(k), DiagonalCov(diag)),
        TrueModel(sig, GaussianNoise(np.zeros(k), DiagonalCov(diag))),
    )
    gamma2 = float(h @ (h / diag))
    deltas = [0.1, 0.4, 1.0, 2.5]
    values = []
    for delta in deltas:
        pe = pe_gaussian(kern, 0.7, delta)
        assert pe == pytest.approx(
            float(q_function(0.5 * delta * math.sqrt(gamma2))), rel=1e-12
        )
        values.append(pe)
    assert all(b < a for a, b in zip(values, values[1:]))


def test_pe_gaussian_independent_of_theta_for_equal_maps():
    kern = _scalar_kernel(k=4, sigma2=2.0, sigma2_true=3.0, mu=0.5, mu_true=-0.25)
    reference = pe_gaussian(kern, 0.0, 0.8)
    for theta_o in (-7.0, -1.0, 2.5, 40.0):
        assert pe_gaussian(kern, theta_o, 0.8) == pytest.approx(reference, rel=1e-12)


def test_equal_linear_cascade_agrees():
    # Three routes to the same number: the general Gaussian expression, the
    # theta-free equal-linear shortcut, and the scalar profile.
    rng = np.random.default_rng(9)
    k = 6
    h = rng.standard_normal(k)
    kern = PeKernel(
        AssumedModel(
            LinearVectorMap(h), np.full(k, 0.3), ScaledIdentityCov(1.5, k)
        ),
        TrueModel(
            LinearVectorMap(h),
            GaussianNoise(np.full(k, -0.2), ScaledIdentityCov(2.5, k)),
        ),
    )
    profile = equal_linear_scalar_profile(kern)
    for delta in (-2.0, -0.3, 0.05, 0.7, 3.0):
        a = pe_gaussian(kern, rng.uniform(-5, 5), delta)
        b = pe_equal_linear(kern, delta)
        c = float(profile.pe(delta))
        assert a == pytest.approx(b, rel=1e-12)
        assert b == pytest.approx(c, rel=1e-12)


def test_profile_against_longhand_gaussian_algebra():
    # Independent derivation with explicit inverses, nothing shared with the
    # implementation path.
    rng = np.random.default_rng(14)
    k = 4
    h = rng.standard_normal(k)
    a = rng.standard_normal((k, k))
    sigma = a @ a.T + k * np.eye(k)
    b_mat = rng.standard_normal((k, k))
    sigma_true = b_mat @ b_mat.T + k * np.eye(k)
    mu = rng.standard_normal(k)
    mu_true = rng.standard_normal(k)
    sig = LinearVectorMap(h)
    kern = PeKernel(
        AssumedModel(sig, mu, DenseCov(sigma)),
        TrueModel(sig, GaussianNoise(mu_true, DenseCov(sigma_true))),
    )
    inv = np.linalg.inv(sigma)
    quad = 0.5 * h @ inv @ h
    lin = h @ inv @ (mu - mu_true)
    scale = math.sqrt((inv @ h) @ sigma_true @ (inv @ h))
    profile = equal_linear_scalar_profile(kern)
    assert profile.quad == pytest.approx(quad, rel=1e-10)
    assert profile.lin == pytest.approx(lin, rel=1e-10)
    assert profile.noise_scale == pytest.approx(scale, rel=1e-10)
    for delta in (0.2, 1.1, -0.8):
        z_pos = quad * delta * delta + lin * delta
        z_neg = quad * delta * delta - lin * delta
        expected = 0.5 * float(
            q_function(z_pos / (scale * abs(delta)))
            + q_function(z_neg / (scale * abs(delta)))
        )
        assert pe_gaussian(kern, 0.0, delta) == pytest.approx(expected, rel=1e-11)


def test_profile_symmetric_when_means_match():
    kern = _scalar_kernel(k=3, sigma2=0.5, sigma2_true=2.0, mu=0.7, mu_true=0.7)
    profile = equal_linear_scalar_profile(kern)
    assert profile.lin == 0.0
    h = np.array([-1.5, -0.2, 0.0, 0.2, 1.5])
    vals = profile.single_q(h)
    assert_allclose(vals, profile.single_q(-h))
    assert_allclose(profile.pe(h), vals)
    assert vals[2] == 0.5


def test_q_argument_free_of_assumed_variance():
    # Isotropic case with equal means: the Q argument is |h| ||hvec|| / (2 s*),
    # so rescaling the assumed variance must not move it.
    h_off = np.array([0.3, 1.7])
    baseline = None
    for sigma2 in (0.01, 1.0, 100.0):
        kern = _scalar_kernel(k=8, sigma2=sigma2, sigma2_true=4.0)
        vals = equal_linear_scalar_profile(kern).single_q(h_off)
        if baseline is None:
            baseline = vals
        else:
            assert_allclose(vals, baseline, rtol=0, atol=1e-15)
    expected = q_function(0.5 * h_off * math.sqrt(8.0) / 2.0)
    assert_allclose(baseline, expected, rtol=1e-12)


def test_pe_mixture_single_component_equals_gaussian():
    k = 3
    h = np.array([1.0, 0.5, -0.5])
    sig = LinearVectorMap(h)
    assumed = AssumedModel(sig, np.zeros(k), ScaledIdentityCov(1.0, k))
    comp = GaussianNoise(np.zeros(k), ScaledIdentityCov(3.0, k))
    kern_mix = PeKernel(assumed, TrueModel(sig, MixtureNoise(np.array([1.0]), (comp,))))
    kern_gauss = PeKernel(assumed, TrueModel(sig, comp))
    for delta in (0.2, 1.0, 4.0):
        assert pe_mixture(kern_mix, 1.0, delta) == pytest.approx(
            pe_gaussian(kern_gauss, 1.0, delta), rel=1e-13
        )


def test_pe_mixture_zero_delta_and_range():
    k = 2
    sig = LinearVectorMap(np.ones(k))
    mix = MixtureNoise(
        np.array([0.6, 0.4]),
        (
            GaussianNoise(np.zeros(k), ScaledIdentityCov(1.0, k)),
            GaussianNoise(np.zeros(k), ScaledIdentityCov(16.0, k)),
        ),
    )
    kern = PeKernel(
        AssumedModel(sig, np.zeros(k), ScaledIdentityCov(1.0, k)), TrueModel(sig, mix)
    )
    assert pe_mixture(kern, 0.0, 0.0) == 0.5
    for delta in (0.3, 1.0, 3.0):
        pe = pe_mixture(kern, 0.0, delta)
        assert 0.0 < pe < 0.5


def test_pe_general_mc_zero_delta_exact():
    kern = _scalar_kernel(k=2)
    prob, stderr = pe_general_mc(kern, 1.0, 0.0, trials=64, seed=0)
    assert prob == 0.5
    assert stderr == 0.0


def test_pe_general_mc_matches_analytic():
    kern = _scalar_kernel(k=4, sigma2=1.0, sigma2_true=2.25, mu_true=0.3)
    delta = 0.9
    exact = pe_gaussian(kern, 0.5, delta)
    prob, stderr = pe_general_mc(kern, 0.5, delta, trials=200_000, seed=3)
    assert stderr > 0.0
    assert abs(prob - exact) < 3.0 * stderr


def test_pe_general_mc_mixture_truth():
    k = 3
    sig = LinearVectorMap(np.ones(k))
    mix = MixtureNoise(
        np.array([0.5, 0.5]),
        (
            GaussianNoise(np.zeros(k), ScaledIdentityCov(1.0, k)),
            GaussianNoise(np.zeros(k), ScaledIdentityCov(9.0, k)),
        ),
    )
    kern = PeKernel(
        AssumedModel(sig, np.zeros(k), ScaledIdentityCov(1.0, k)), TrueModel(sig, mix)
    )
    exact = pe_mixture(kern, 2.0, 1.2)
    prob, stderr = pe_general_mc(kern, 2.0, 1.2, trials=200_000, seed=8)
    assert abs(prob - exact) < 3.0 * stderr


def test_projected_noise_stats_mixture_pooling():
    k = 2
    sig = LinearVectorMap(np.ones(k))
    mix = MixtureNoise(
        np.array([0.25, 0.75]),
        (
            GaussianNoise(np.full(k, 1.0), ScaledIdentityCov(1.0, k)),
            GaussianNoise(np.full(k, -1.0), ScaledIdentityCov(4.0, k)),
        ),
    )
    kern = PeKernel(
        AssumedModel(sig, np.zeros(k), ScaledIdentityCov(1.0, k)), TrueModel(sig, mix)
    )
    stats = projected_noise_stats(kern, 0.0, 1.0)
    # d = -hvec, w = -hvec; per-component projections have means -+2, vars 2/8.
    assert_allclose(stats.comp_means, [-2.0, 2.0])
    assert_allclose(stats.comp_stddevs, [math.sqrt(2.0), math.sqrt(8.0)])
    pooled_mean = 0.25 * -2.0 + 0.75 * 2.0
    pooled_var = 0.25 * (2.0 + 4.0) + 0.75 * (8.0 + 4.0) - pooled_mean**2
    assert stats.mean == pytest.approx(pooled_mean)
    assert stats.stddev == pytest.approx(math.sqrt(pooled_var))


def test_wrong_noise_type_raises():
    kern = _scalar_kernel(k=2)
    with pytest.raises(ValueError, match="mixture"):
        pe_mixture(kern, 0.0, 1.0)
    mix_kern = PeKernel(
        kern.assumed,
        TrueModel(
            kern.truth.signal,
            MixtureNoise(
                np.array([1.0]),
                (GaussianNoise(np.zeros(2), ScaledIdentityCov(1.0, 2)),),
            ),
        ),
    )
    with pytest.raises(ValueError, match="Gaussian"):
        pe_gaussian(mix_kern, 0.0, 1.0)
    with pytest.raises(ValueError, match="identical"):
        pe_equal_linear(
            PeKernel(
                AssumedModel(
                    LinearVectorMap(np.ones(2)), np.zeros(2), ScaledIdentityCov(1.0, 2)
                ),
                TrueModel(
                    LinearVectorMap(np.array([1.0, 2.0])),
                    GaussianNoise(np.zeros(2), ScaledIdentityCov(1.0, 2)),
                ),
            ),
            1.0,
        )


def test_kernel_dimension_validation():
    with pytest.raises(ValueError, match="K="):
        PeKernel(
            AssumedModel(
                LinearVectorMap(np.ones(3)), np.zeros(3), ScaledIdentityCov(1.0, 3)
            ),
            TrueModel(
                LinearVectorMap(np.ones(2)),
                GaussianNoise(np.zeros(2), ScaledIdentityCov(1.0, 2)),
            ),
        )
