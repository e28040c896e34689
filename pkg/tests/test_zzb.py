"""Tests for the scalar and vector bound evaluators and scenario constants."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from zzbound.models import (
    AssumedModel,
    DenseCov,
    DiagonalCov,
    GaussianNoise,
    IntervalAxis,
    LatticeAxis,
    LinearVectorMap,
    MixtureNoise,
    Prior,
    ScaledIdentityCov,
    TrueModel,
    uniform_box,
    uniform_interval,
)
from zzbound.special_math import q_function
from zzbound.zzb import (
    DeltaSearch,
    QuadratureRule,
    ScalarBoundSpec,
    VectorBoundSpec,
    gamma_from_scenario,
    lattice_staircase_sum,
    overlap_rows,
    prior_overlap,
    zzb_closed_form_q_linear,
    zzb_scalar_general,
    zzb_scalar_independent,
    zzb_scalar_symmetric,
    zzb_vector,
)

# Closed-form values on the (gamma, T) grid, frozen from an independent
# high-precision evaluation of the three-term expression.
CLOSED_FORM_ORACLE = {
    (0.1, 1.0): 8.001102889632e-02,
    (0.1, 10.0): 5.213875734813e00,
    (0.1, 100.0): 2.234038479732e01,
    (1.0, 1.0): 5.213875734813e-02,
    (1.0, 10.0): 2.234038479732e-01,
    (1.0, 100.0): 2.473403847973e-01,
    (10.0, 1.0): 2.234038479732e-03,
    (10.0, 10.0): 2.473403847973e-03,
    (10.0, 100.0): 2.497340384797e-03,
}


def test_closed_form_frozen_grid():
    for (gamma, t), expected in CLOSED_FORM_ORACLE.items():
        assert zzb_closed_form_q_linear(gamma, t) == pytest.approx(expected, rel=1e-9)


def test_closed_form_small_t_limit():
    # As T gamma -> 0 the bound collapses to the prior variance T^2 / 12.
    value = zzb_closed_form_q_linear(1.0, 1e-3)
    assert value == pytest.approx(8.330008814551621e-08, rel=1e-9)
    assert value == pytest.approx(1e-6 / 12.0, rel=5e-4)


def test_closed_form_asymptote_gap_law():
    # For T gamma >= 50 the relative distance to 1 / (4 gamma^2) is exactly
    # 8 / (3 sqrt(2 pi) T gamma) at double precision (the remaining terms of
    # the expansion underflow).
    for gamma, t in [(1.0, 50.0), (1.0, 100.0), (0.5, 2000.0), (2.0, 500.0), (1.0, 1e6)]:
        asym = 1.0 / (4.0 * gamma * gamma)
        rel_gap = (asym - zzb_closed_form_q_linear(gamma, t)) / asym
        predicted = 8.0 / (3.0 * math.sqrt(2.0 * math.pi) * t * gamma)
        assert rel_gap == pytest.approx(predicted, rel=1e-9)
    assert 8.0 / (3.0 * math.sqrt(2.0 * math.pi) * 50.0) == pytest.approx(
        2.127692e-02, rel=1e-6
    )


def test_closed_form_scaling_invariance():
    # ZZB(c gamma, T / c) = ZZB(gamma, T) / c^2.
    for gamma, t in ((0.7, 13.0), (3.0, 4.0)):
        base = zzb_closed_form_q_linear(gamma, t)
        assert zzb_closed_form_q_linear(2.0 * gamma, t / 2.0) == pytest.approx(
            base / 4.0, rel=1e-13
        )
        assert zzb_closed_form_q_linear(10.0 * gamma, t / 10.0) == pytest.approx(
            base / 100.0, rel=1e-12
        )


def test_closed_form_rejects_nonpositive():
    with pytest.raises(ValueError, match="positive"):
        zzb_closed_form_q_linear(0.0, 1.0)
    with pytest.raises(ValueError, match="positive"):
        zzb_closed_form_q_linear(1.0, -2.0)


def test_closed_form_matches_quadrature():
    rule = QuadratureRule(points=4097, rel_tol=1e-9, max_doublings=6)
    for gamma, t in ((0.1, 10.0), (1.0, 10.0), (5.0, 3.0)):
        spec = ScalarBoundSpec(
            uniform_interval(t), lambda h, g=gamma: q_function(g * h), rule
        )
        result = zzb_scalar_independent(spec)
        assert result.converged
        assert result.form == "independent"
        assert result.value == pytest.approx(
            zzb_closed_form_q_linear(gamma, t), rel=1e-8
        )


def test_quadrature_constant_pe_limits():
    # Pe = 1/2 (pure guessing) gives the uniform-prior variance T^2 / 12;
    # Pe = 0 gives zero.
    t = 7.0
    spec_half = ScalarBoundSpec(uniform_interval(t), lambda h: np.full(np.shape(h), 0.5))
    assert zzb_scalar_independent(spec_half).value == pytest.approx(
        t * t / 12.0, rel=1e-10
    )
    spec_zero = ScalarBoundSpec(uniform_interval(t), lambda h: np.zeros(np.shape(h)))
    assert zzb_scalar_independent(spec_zero).value == 0.0


def test_general_form_reduces_to_independent():
    rng = np.random.default_rng(21)
    for _ in range(6):
        gamma = float(rng.uniform(0.2, 4.0))
        t = float(rng.uniform(1.0, 15.0))
        prior = uniform_interval(t)
        independent = zzb_scalar_independent(
            ScalarBoundSpec(prior, lambda h: q_function(gamma * h))
        )
        general = zzb_scalar_general(
            ScalarBoundSpec(prior, lambda theta, h: q_function(gamma * h))
        )
        assert general.form == "general_tensor"
        assert general.value == pytest.approx(independent.value, rel=1e-6)


def test_general_form_with_location_dependence():
    # A pe that improves with theta must land strictly below the pe frozen at
    # theta = 0 and above the pe frozen at theta = T.
    t = 4.0
    prior = uniform_interval(t)

    def pe(theta, h):
        return q_function((1.0 + theta) * h)

    mid = zzb_scalar_general(ScalarBoundSpec(prior, pe)).value
    hi = zzb_closed_form_q_linear(1.0, t)
    lo = zzb_closed_form_q_linear(1.0 + t, t)
    assert lo < mid < hi


def test_symmetric_split_even_profile_matches_independent():
    gamma, t = 1.3, 6.0
    prior = uniform_interval(t)
    even = zzb_scalar_symmetric(
        ScalarBoundSpec(prior, lambda h: q_function(gamma * np.abs(h)))
    )
    ind = zzb_scalar_independent(ScalarBoundSpec(prior, lambda h: q_function(gamma * h)))
    assert even.form == "symmetric_split"
    assert even.value == pytest.approx(ind.value, rel=1e-10)


def test_symmetric_split_mirror_bitwise():
    # Flipping the sign of the asymmetric part swaps the two half-integrals,
    # so the value must be bit-identical.
    t = 10.0
    prior = uniform_interval(t)

    def branch(lin):
        def g(h):
            h = np.asarray(h, dtype=float)
            z = 0.5 * h * h + lin * h
            with np.errstate(divide="ignore", invalid="ignore"):
                arg = np.where(h == 0.0, 0.0, z / np.abs(h))
            return np.where(h == 0.0, 0.5, q_function(arg))

        return g

    plus = zzb_scalar_symmetric(ScalarBoundSpec(prior, branch(2.0)))
    minus = zzb_scalar_symmetric(ScalarBoundSpec(prior, branch(-2.0)))
    assert plus.value == minus.value


def test_scalar_bounds_reject_vector_priors():
    prior = uniform_box([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValueError, match="one-axis"):
        zzb_scalar_independent(ScalarBoundSpec(prior, lambda h: h))


# ---------------------------------------------------------------------------
# Scenario constants
# ---------------------------------------------------------------------------


def _linear_models(k, h, cov_assumed, noise):
    sig = LinearVectorMap(np.asarray(h, dtype=float))
    assumed = AssumedModel(sig, np.zeros(k), cov_assumed)
    return assumed, TrueModel(sig, noise)


def test_gamma_matched_oracle():
    k = 6
    h = np.arange(1.0, k + 1.0)
    diag = np.linspace(0.5, 3.0, k)
    assumed, truth = _linear_models(
        k, h, ScaledIdentityCov(1.0, k), GaussianNoise(np.zeros(k), DiagonalCov(diag))
    )
    expected = 0.5 * math.sqrt(float(h @ (h / diag)))
    assert gamma_from_scenario(assumed, truth, "matched") == pytest.approx(
        expected, rel=1e-13
    )


def test_gamma_mismatch_longhand():
    rng = np.random.default_rng(31)
    k = 5
    h = rng.standard_normal(k)
    a = rng.standard_normal((k, k))
    sigma = a @ a.T + k * np.eye(k)
    b = rng.standard_normal((k, k))
    sigma_true = b @ b.T + k * np.eye(k)
    assumed, truth = _linear_models(
        k, h, DenseCov(sigma), GaussianNoise(np.zeros(k), DenseCov(sigma_true))
    )
    inv = np.linalg.inv(sigma)
    a_val = h @ inv @ h
    b_val = h @ inv @ sigma_true @ inv @ h
    assert gamma_from_scenario(assumed, truth, "mismatch") == pytest.approx(
        0.5 * a_val / math.sqrt(b_val), rel=1e-10
    )


def test_gamma_mismatch_equal_cov_routes_to_matched_bitwise():
    k = 4
    h = np.array([1.0, 2.0, 3.0, 4.0])
    diag = np.array([0.3, 0.7, 1.1, 1.9])
    assumed, truth = _linear_models(
        k, h, DiagonalCov(diag), GaussianNoise(np.zeros(k), DiagonalCov(diag.copy()))
    )
    mm = gamma_from_scenario(assumed, truth, "mismatch")
    matched = gamma_from_scenario(assumed, truth, "matched")
    assert mm == matched  # bitwise, not approximately


def test_gamma_isotropic_mismatch_equals_matched():
    # Assumed white, truth white with a different level: the slopes agree and
    # the asymptote is the true per-sample variance over K.
    k, sigma2, extra = 100, 0.5, 1.7
    h = np.ones(k)
    assumed, truth = _linear_models(
        k,
        h,
        ScaledIdentityCov(sigma2, k),
        GaussianNoise(np.zeros(k), ScaledIdentityCov(sigma2 + extra, k)),
    )
    gamma = gamma_from_scenario(assumed, truth, "mismatch")
    assert 1.0 / (4.0 * gamma * gamma) == pytest.approx((sigma2 + extra) / k, rel=1e-12)


def test_gamma_mixture_pooling_and_extremes():
    k = 50
    h = np.ones(k)
    v1, v2 = 1.0, 625.0

    def mix(w1):
        return MixtureNoise(
            np.array([w1, 1.0 - w1]),
            (
                GaussianNoise(np.zeros(k), ScaledIdentityCov(v1, k)),
                GaussianNoise(np.zeros(k), ScaledIdentityCov(v2, k)),
            ),
        )

    assumed, _ = _linear_models(
        k, h, ScaledIdentityCov(1.0, k), GaussianNoise(np.zeros(k), ScaledIdentityCov(1.0, k))
    )
    for w1 in (0.0, 0.25, 0.9, 1.0):
        truth = TrueModel(assumed.signal, mix(w1))
        gamma = gamma_from_scenario(assumed, truth, "mixture")
        pooled = w1 * v1 + (1.0 - w1) * v2
        assert gamma == pytest.approx(0.5 * math.sqrt(k / pooled), rel=1e-13)


def test_gamma_case_validation():
    k = 3
    h = np.ones(k)
    assumed, truth = _linear_models(
        k, h, ScaledIdentityCov(1.0, k), GaussianNoise(np.zeros(k), ScaledIdentityCov(1.0, k))
    )
    with pytest.raises(ValueError, match="unsupported"):
        gamma_from_scenario(assumed, truth, "other")
    biased = TrueModel(
        assumed.signal, GaussianNoise(np.full(k, 1.0), ScaledIdentityCov(1.0, k))
    )
    with pytest.raises(ValueError, match="equal noise means"):
        gamma_from_scenario(assumed, biased, "mismatch")


# ---------------------------------------------------------------------------
# Overlap and the lattice tail sum
# ---------------------------------------------------------------------------


def test_prior_overlap_box():
    prior = uniform_box([0.0, 0.0], [1.0, 1.0])
    assert prior_overlap(prior, [0.5, 0.25]) == pytest.approx(0.375)
    assert prior_overlap(prior, [0.0, 0.0]) == 1.0
    assert prior_overlap(prior, [1.0, 0.0]) == 0.0
    assert prior_overlap(prior, [-0.5, -0.25]) == pytest.approx(0.375)


def test_overlap_rows_matches_scalar_api():
    prior = Prior((LatticeAxis(8, 0.0, 1.0), IntervalAxis(0.0, 2.0)))
    deltas = np.array([[0.0, 0.0], [3.0, 0.5], [2.5, 0.1], [-3.0, -0.5], [8.0, 0.0]])
    batch = overlap_rows(prior, deltas)
    singles = [prior_overlap(prior, d) for d in deltas]
    assert_allclose(batch, singles)
    assert batch[2] == 0.0  # off-lattice tau offset


def test_lattice_staircase_frozen_values():
    # Pure guessing on N-point unit lattices.
    assert lattice_staircase_sum(1.0, 5, np.array([0.4, 0.3, 0.2, 0.1])) == pytest.approx(2.0)
    assert lattice_staircase_sum(1.0, 4, np.array([0.375, 0.25, 0.125])) == pytest.approx(1.5)
    assert lattice_staircase_sum(1.0, 1, np.zeros(0)) == 0.0


def test_lattice_staircase_matches_guessing_estimator():
    # With pe = 1/2 everywhere, the bound must be attained by the best
    # constant lattice-valued estimator under the uniform lattice prior.
    for count in (2, 3, 4, 5, 8, 9):
        g = np.array([0.5 * (1.0 - j / count) for j in range(1, count)])
        bound = lattice_staircase_sum(1.0, count, g)
        values = np.arange(count, dtype=float)
        best = min(float(np.mean((values - c) ** 2)) for c in values)
        assert bound == pytest.approx(best, rel=1e-12)


def test_lattice_staircase_validation():
    with pytest.raises(ValueError, match="shape"):
        lattice_staircase_sum(1.0, 4, np.zeros(5))
    with pytest.raises(ValueError, match="count"):
        lattice_staircase_sum(1.0, 0, np.zeros(0))


# ---------------------------------------------------------------------------
# Vector bound
# ---------------------------------------------------------------------------


def test_vector_bound_scalar_axis_reduction():
    gamma, t = 0.8, 9.0
    prior = uniform_interval(t)
    vec = zzb_vector(
        VectorBoundSpec(
            direction=np.array([1.0]),
            prior=prior,
            pe=lambda rows: q_function(gamma * np.abs(rows[:, 0])),
        )
    )
    scalar = zzb_scalar_independent(
        ScalarBoundSpec(prior, lambda h: q_function(gamma * h))
    )
    assert vec.value == pytest.approx(scalar.value, rel=1e-10)


def test_vector_bound_free_axis_does_not_change_separable_case():
    # pe depending only on the pinned coordinate: the free-axis maximum sits
    # at offset zero where its overlap factor is one, so the two-axis bound
    # reduces to the scalar bound.
    gamma, t = 1.1, 5.0
    prior2 = uniform_box([0.0, 0.0], [t, 3.0])
    vec = zzb_vector(
        VectorBoundSpec(
            direction=np.array([1.0, 0.0]),
            prior=prior2,
            pe=lambda rows: q_function(gamma * np.abs(rows[:, 0])),
            search=DeltaSearch(grid_points=129, refine_iters=60),
        )
    )
    scalar = zzb_scalar_independent(
        ScalarBoundSpec(uniform_interval(t), lambda h: q_function(gamma * h))
    )
    assert vec.form == "continuous_profile"
    assert vec.value == pytest.approx(scalar.value, rel=1e-6)


def test_vector_bound_lattice_direction_matches_manual_sum():
    count = 9
    gamma = 0.6
    prior = Prior((LatticeAxis(count, 0.0, 1.0), IntervalAxis(0.5, 1.5)))

    def pe(rows):
        return q_function(gamma * np.abs(rows[:, 0]))

    vec = zzb_vector(
        VectorBoundSpec(direction=np.array([1.0, 0.0]), prior=prior, pe=pe)
    )
    g = np.array(
        [float(q_function(gamma * j)) * (1.0 - j / count) for j in range(1, count)]
    )
    assert vec.form == "lattice_staircase"
    assert vec.value == pytest.approx(lattice_staircase_sum(1.0, count, g), rel=1e-12)


def test_vector_bound_alpha_direction_uses_free_lattice_max():
    # pe rewards a one-step lattice shift; the alpha-direction bound must
    # exceed the no-shift profile to prove the free maximization is live.
    prior = Prior((LatticeAxis(30, 0.0, 1.0), IntervalAxis(0.0, 1.0)))

    def pe_with_shift(rows):
        dtau = np.abs(rows[:, 0])
        dal = np.abs(rows[:, 1])
        base = q_function(3.0 * dal)
        boost = np.where(dtau == 1.0, 0.45 + 0.0 * dal, base)
        return np.where(dtau == 0.0, base, np.where(dtau == 1.0, boost, 0.0))

    with_shift = zzb_vector(
        VectorBoundSpec(direction=np.array([0.0, 1.0]), prior=prior, pe=pe_with_shift)
    )

    def pe_no_shift(rows):
        dtau = np.abs(rows[:, 0])
        return np.where(dtau == 0.0, q_function(3.0 * np.abs(rows[:, 1])), 0.0)

    without = zzb_vector(
        VectorBoundSpec(direction=np.array([0.0, 1.0]), prior=prior, pe=pe_no_shift)
    )
    assert with_shift.form == "continuous_profile"
    assert with_shift.value > without.value


def test_vector_bound_includes_prior_flag():
    # With pe_includes_prior=True the caller supplies the overlap factor, so
    # baking it in by hand must reproduce the default path.
    gamma, t = 0.9, 6.0
    prior = uniform_interval(t)
    auto = zzb_vector(
        VectorBoundSpec(
            direction=np.array([1.0]),
            prior=prior,
            pe=lambda rows: q_function(gamma * np.abs(rows[:, 0])),
        )
    )
    manual = zzb_vector(
        VectorBoundSpec(
            direction=np.array([1.0]),
            prior=prior,
            pe=lambda rows: q_function(gamma * np.abs(rows[:, 0]))
            * np.maximum(0.0, 1.0 - np.abs(rows[:, 0]) / t),
            pe_includes_prior=True,
        )
    )
    assert auto.value == pytest.approx(manual.value, rel=1e-12)


def test_vector_bound_direction_validation():
    prior = uniform_box([0.0], [1.0])
    with pytest.raises(ValueError, match="dimension"):
        VectorBoundSpec(
            direction=np.array([1.0, 0.0]), prior=prior, pe=lambda rows: rows[:, 0]
        )
    with pytest.raises(ValueError, match="nonzero"):
        VectorBoundSpec(
            direction=np.array([0.0]), prior=prior, pe=lambda rows: rows[:, 0]
        )
