"""Scalar and vector mean-square-error lower bounds from error probabilities.

A bound evaluation has three ingredients: an error-probability profile (how
distinguishable two parameter values at a given offset are), a prior (how much
probability mass the offset pair shares), and an integration or summation over
offsets. This module supplies the integrators plus the closed form available
when the profile is exactly Q(gamma * h_off) on a uniform interval prior.

Quadrature is composite Simpson with grid doubling; every bound reports the
doubling convergence through BoundResult.converged rather than raising, so
sweeps can flag rows instead of dying. Sums and quadrature reductions rely on
numpy's pairwise summation in fixed index order, which keeps results identical
across worker counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .models import (
    AssumedModel,
    GaussianNoise,
    IntervalAxis,
    LatticeAxis,
    LinearVectorMap,
    MixtureNoise,
    Prior,
    TrueModel,
)
from .special_math import inc_gamma_reg, q_function

__all__ = [
    "QuadratureRule",
    "BoundResult",
    "ScalarBoundSpec",
    "zzb_scalar_general",
    "zzb_scalar_independent",
    "zzb_scalar_symmetric",
    "zzb_closed_form_q_linear",
    "gamma_from_scenario",
    "prior_overlap",
    "overlap_rows",
    "lattice_staircase_sum",
    "DeltaSearch",
    "VectorBoundSpec",
    "zzb_vector",
]

# Tensor quadrature (outer offset x inner location) caps its own doubling so
# the mesh never exceeds roughly 8193^2 nodes.
_TENSOR_MAX_SIDE = 8193


@dataclass(frozen=True)
class QuadratureRule:
    """Composite-Simpson settings shared by the bound integrators.

    points is the starting grid size for one-dimensional sweeps (made odd if
    needed); each doubling refines until successive values agree to rel_tol.
    tensor_points seeds the two-dimensional general form, which doubles both
    axes together.
    """

    points: int = 4097
    rel_tol: float = 1e-5
    max_doublings: int = 10
    tensor_points: int = 257

    def __post_init__(self) -> None:
        if self.points < 5 or self.tensor_points < 5:
            raise ValueError("quadrature needs at least 5 points per axis")
        if self.rel_tol <= 0.0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_doublings < 0:
            raise ValueError("max_doublings must be >= 0")


@dataclass(frozen=True)
class BoundResult:
    """Bound value with its convergence flag and the evaluation route taken."""

    value: float
    converged: bool = True
    form: str = ""


@dataclass(frozen=True, eq=False)
class ScalarBoundSpec:
    """Scalar-parameter bound problem: uniform interval prior plus a profile.

    The profile signature depends on the operation: zzb_scalar_independent
    wants pe(h_off) vectorized over an offset array, zzb_scalar_general wants
    pe(theta_o, h_off) vectorized elementwise over equal-shape arrays, and
    zzb_scalar_symmetric wants the signed one-sided branch g(h_off) for
    h_off in [-T, T].
    """

    prior: Prior
    pe: Callable[..., np.ndarray]
    quadrature: QuadratureRule = QuadratureRule()


def _interval_width(prior: Prior) -> float:
    if prior.n_theta != 1 or not isinstance(prior.axes[0], IntervalAxis):
        raise ValueError("scalar bounds require a one-axis interval prior")
    return prior.axes[0].width


def _odd(n: int) -> int:
    return n if n % 2 == 1 else n + 1


def _simpson_last(y: np.ndarray, step: float) -> np.ndarray:
    """Composite Simpson along the last axis (odd node count)."""
    s = (
        y[..., 0]
        + y[..., -1]
        + 4.0 * np.sum(y[..., 1::2], axis=-1)
        + 2.0 * np.sum(y[..., 2:-1:2], axis=-1)
    )
    return s * (step / 3.0)


def _adaptive_1d(
    f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, rule: QuadratureRule
) -> tuple[float, bool]:
    """Simpson value of f on [lo, hi] with grid doubling to rule.rel_tol."""
    n = _odd(rule.points)
    x = np.linspace(lo, hi, n)
    prev = float(_simpson_last(np.asarray(f(x), dtype=float), (hi - lo) / (n - 1)))
    for _ in range(rule.max_doublings):
        n = 2 * n - 1
        x = np.linspace(lo, hi, n)
        cur = float(_simpson_last(np.asarray(f(x), dtype=float), (hi - lo) / (n - 1)))
        if abs(cur - prev) <= rule.rel_tol * max(abs(cur), 1e-300):
            return cur, True
        prev = cur
    return prev, False


# ---------------------------------------------------------------------------
# Scalar bounds
# ---------------------------------------------------------------------------


def zzb_scalar_general(spec: ScalarBoundSpec) -> BoundResult:
    """Offset-and-location form (1/T) int_0^T h int_0^{T-h} pe(t, t+h) dt dh.

    The inner integral is mapped onto a fixed unit interval so the two
    Simpson grids form a tensor mesh; both axes double together until the
    value settles.
    """
    t_width = _interval_width(spec.prior)
    rule = spec.quadrature

    def value_at(n: int) -> float:
        h = np.linspace(0.0, t_width, n)
        u = np.linspace(0.0, 1.0, n)
        theta = u[None, :] * (t_width - h)[:, None]
        offs = np.broadcast_to(h[:, None], theta.shape)
        pe_vals = np.asarray(spec.pe(theta, offs), dtype=float)
        inner = (t_width - h) * _simpson_last(pe_vals, 1.0 / (n - 1))
        outer = _simpson_last(h * inner, t_width / (n - 1))
        return float(outer) / t_width

    n = _odd(min(rule.tensor_points, _TENSOR_MAX_SIDE))
    prev = value_at(n)
    converged = False
    for _ in range(rule.max_doublings):
        if 2 * n - 1 > _TENSOR_MAX_SIDE:
            break
        n = 2 * n - 1
        cur = value_at(n)
        if abs(cur - prev) <= rule.rel_tol * max(abs(cur), 1e-300):
            converged = True
            prev = cur
            break
        prev = cur
    return BoundResult(max(prev, 0.0), converged, "general_tensor")


def zzb_scalar_independent(spec: ScalarBoundSpec) -> BoundResult:
    """Location-free form (1/T) int_0^T h (T-h) pe(h) dh."""
    t_width = _interval_width(spec.prior)

    def f(h: np.ndarray) -> np.ndarray:
        return h * (t_width - h) * np.asarray(spec.pe(h), dtype=float)

    val, conv = _adaptive_1d(f, 0.0, t_width, spec.quadrature)
    return BoundResult(max(val / t_width, 0.0), conv, "independent")


def zzb_scalar_symmetric(spec: ScalarBoundSpec) -> BoundResult:
    """Signed form (1/2T) int_{-T}^{T} |h| (T-|h|) g(h) dh.

    g is the one-sided decision branch, which need not be even when the
    assumed and true noise means differ. The two half-lines are integrated
    separately (the integrand has a kink at 0), each with its own doubling,
    so a sign flip of the asymmetry maps one half exactly onto the other.
    """
    t_width = _interval_width(spec.prior)

    def f_pos(h: np.ndarray) -> np.ndarray:
        return h * (t_width - h) * np.asarray(spec.pe(h), dtype=float)

    def f_neg(h: np.ndarray) -> np.ndarray:
        return h * (t_width - h) * np.asarray(spec.pe(-h), dtype=float)

    val_pos, conv_pos = _adaptive_1d(f_pos, 0.0, t_width, spec.quadrature)
    val_neg, conv_neg = _adaptive_1d(f_neg, 0.0, t_width, spec.quadrature)
    value = (val_pos + val_neg) / (2.0 * t_width)
    return BoundResult(max(value, 0.0), conv_pos and conv_neg, "symmetric_split")


def zzb_closed_form_q_linear(gamma: float, t: float) -> float:
    """Closed-form bound for pe(h) = Q(gamma h) on a uniform [0, T] prior.

    Evaluates
    (T^2/6) Q(T gamma) + P(3/2, T^2 gamma^2 / 2) / (4 gamma^2)
    - 2 P(2, T^2 gamma^2 / 2) / (3 T sqrt(2 pi) gamma^3)
    with P the regularized lower incomplete gamma function. Approaches
    T^2/12 as T gamma -> 0 and 1/(4 gamma^2) from below as T gamma grows,
    with relative gap 8 / (3 sqrt(2 pi) T gamma).
    """
    if gamma <= 0.0 or t <= 0.0:
        raise ValueError(f"gamma and t must be positive, got gamma={gamma}, t={t}")
    x = 0.5 * (t * gamma) ** 2
    term_tail = (t * t / 6.0) * float(q_function(t * gamma))
    term_main = inc_gamma_reg(1.5, x) / (4.0 * gamma**2)
    term_corr = 2.0 * inc_gamma_reg(2.0, x) / (3.0 * t * math.sqrt(2.0 * math.pi) * gamma**3)
    return term_tail + term_main - term_corr


# ---------------------------------------------------------------------------
# Scenario constants
# ---------------------------------------------------------------------------


def _scalar_linear_hvec(assumed: AssumedModel, truth: TrueModel) -> np.ndarray:
    a, t = assumed.signal, truth.signal
    if (
        isinstance(a, LinearVectorMap)
        and isinstance(t, LinearVectorMap)
        and np.array_equal(a.hvec, t.hvec)
    ):
        return t.hvec
    raise ValueError("this scenario constant requires identical scalar linear maps")


def _gamma_matched(truth: TrueModel) -> float:
    if not isinstance(truth.noise, GaussianNoise):
        raise ValueError("matched gamma requires Gaussian truth")
    if not isinstance(truth.signal, LinearVectorMap):
        raise ValueError("matched gamma requires a scalar linear map")
    return 0.5 * math.sqrt(truth.noise.cov.qf_inv(truth.signal.hvec))


def gamma_from_scenario(assumed: AssumedModel, truth: TrueModel, case: str) -> float:
    """Slope of the linear-in-offset Q argument for the supported scenarios.

    case "matched": gamma = sqrt(h^T Sigma*^-1 h) / 2 from the truth alone.
    case "mismatch": Gaussian truth, identical scalar maps and means;
    gamma = (h^T Sigma^-1 h) / (2 sqrt(h^T Sigma^-1 Sigma* Sigma^-1 h)).
    When the two covariances are numerically identical this routes to the
    matched expression so both paths return bit-identical values.
    case "mixture": zero-mean Gaussian-mixture truth, identical scalar maps;
    the second moment pools the per-component covariances by weight.
    """
    if case == "matched":
        return _gamma_matched(truth)
    if case == "mismatch":
        hvec = _scalar_linear_hvec(assumed, truth)
        noise = truth.noise
        if not isinstance(noise, GaussianNoise):
            raise ValueError("mismatch gamma requires Gaussian truth")
        if not np.array_equal(assumed.noise_mean, noise.mean):
            raise ValueError("mismatch gamma requires equal noise means")
        if np.array_equal(assumed.noise_cov.dense(), noise.cov.dense()):
            return _gamma_matched(truth)
        a_val = assumed.noise_cov.qf_inv(hvec)
        w = assumed.noise_cov.solve(hvec)
        b_val = noise.cov.qf(w)
        return 0.5 * a_val / math.sqrt(b_val)
    if case == "mixture":
        hvec = _scalar_linear_hvec(assumed, truth)
        noise = truth.noise
        if not isinstance(noise, MixtureNoise):
            raise ValueError("mixture gamma requires mixture truth")
        if np.any(assumed.noise_mean != 0.0) or any(
            np.any(c.mean != 0.0) for c in noise.components
        ):
            raise ValueError("mixture gamma requires zero-mean noise everywhere")
        a_val = assumed.noise_cov.qf_inv(hvec)
        w = assumed.noise_cov.solve(hvec)
        b_val = float(
            np.sum(noise.weights * np.array([c.cov.qf(w) for c in noise.components]))
        )
        return 0.5 * a_val / math.sqrt(b_val)
    raise ValueError(f"unsupported scenario case {case!r}")


# ---------------------------------------------------------------------------
# Prior overlap and the vector bound
# ---------------------------------------------------------------------------


def prior_overlap(prior: Prior, delta) -> float:
    """Shared mass int min[p(theta), p(theta + delta)] d(theta) in [0, 1]."""
    de = np.atleast_1d(np.asarray(delta, dtype=float))
    if de.size != prior.n_theta:
        raise ValueError(f"delta has dimension {de.size}, prior expects {prior.n_theta}")
    out = 1.0
    for val, ax in zip(de, prior.axes):
        out *= ax.overlap(float(val))
    return out


def overlap_rows(prior: Prior, deltas: np.ndarray) -> np.ndarray:
    """Vectorized prior_overlap over rows of a (M, n_theta) offset array."""
    d = np.asarray(deltas, dtype=float)
    if d.ndim != 2 or d.shape[1] != prior.n_theta:
        raise ValueError(f"deltas must have shape (M, {prior.n_theta})")
    out = np.ones(d.shape[0], dtype=float)
    for j, ax in enumerate(prior.axes):
        col = d[:, j]
        if isinstance(ax, IntervalAxis):
            out *= np.maximum(0.0, 1.0 - np.abs(col) / ax.width)
        else:
            steps = col / ax.step
            rounded = np.round(steps)
            on_lattice = np.abs(steps - rounded) <= 1e-9
            frac = np.maximum(0.0, 1.0 - np.abs(rounded) / ax.count)
            out *= np.where(on_lattice, frac, 0.0)
    return out


def lattice_staircase_sum(step: float, count: int, g_tilde: np.ndarray) -> float:
    """Lattice tail-sum bound sum_m (2m-1) min(1, 2 max(G(2m-1), G(2m))).

    g_tilde[j-1] holds the overlap-weighted error probability at offset j
    lattice steps, already maximized over any free parameter directions.
    Valid for estimators confined to the same lattice as the prior: the
    squared error then decomposes over integer tail events, and each tail
    P(|err| >= m steps) is bounded through the offset-(2m-1) and offset-(2m)
    binary tests (both parities give valid tails; the larger is kept).
    """
    g = np.asarray(g_tilde, dtype=float)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if g.shape != (count - 1,):
        raise ValueError(f"g_tilde must have shape ({count - 1},), got {g.shape}")
    if count == 1:
        return 0.0
    padded = np.concatenate([g, np.zeros(count + 2)])
    m = np.arange(1, count)
    odd = padded[2 * m - 2]  # offset 2m-1 lives at index 2m-2
    even = padded[2 * m - 1]  # offset 2m at index 2m-1
    tails = np.minimum(1.0, 2.0 * np.maximum(odd, even))
    return float(step * step * np.sum((2 * m - 1) * tails))


@dataclass(frozen=True)
class DeltaSearch:
    """Search settings for the offset maximization inside the vector bound.

    grid_points controls the scan density on each free continuous axis,
    refine_iters the ternary-refinement depth after the scan, and
    lattice_window caps the |offset| (in steps) scanned on free lattice axes
    (None scans every offset when the axis has at most 129 points, else
    offsets up to 128).
    """

    grid_points: int = 65
    refine_iters: int = 40
    lattice_window: int | None = None

    def __post_init__(self) -> None:
        if self.grid_points < 3:
            raise ValueError("grid_points must be >= 3")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be >= 0")


@dataclass(frozen=True, eq=False)
class VectorBoundSpec:
    """Vector-parameter bound along a direction.

    pe maps a (M, n_theta) array of offsets to (M,) error probabilities.
    With pe_includes_prior=False the integrand is prior_overlap(delta) times
    pe(delta); with True, pe is treated as the full location-averaged
    integrand (overlap weighting and any location dependence already inside),
    which is how scenarios with location-dependent error probabilities plug
    in after collapsing their inner average.
    """

    direction: np.ndarray
    prior: Prior
    pe: Callable[[np.ndarray], np.ndarray]
    pe_includes_prior: bool = False
    search: DeltaSearch = DeltaSearch()
    quadrature: QuadratureRule = QuadratureRule()

    def __post_init__(self) -> None:
        a = np.atleast_1d(np.asarray(self.direction, dtype=float))
        if a.size != self.prior.n_theta:
            raise ValueError(
                f"direction has dimension {a.size}, prior expects {self.prior.n_theta}"
            )
        if not np.all(np.isfinite(a)) or float(a @ a) == 0.0:
            raise ValueError("direction must be finite and nonzero")
        object.__setattr__(self, "direction", a)


def _g_rows(spec: VectorBoundSpec, deltas: np.ndarray) -> np.ndarray:
    vals = np.asarray(spec.pe(deltas), dtype=float)
    if spec.pe_includes_prior:
        return vals
    return vals * overlap_rows(spec.prior, deltas)


def _free_axis_candidates(ax, search: DeltaSearch) -> np.ndarray:
    """Candidate offsets scanned on one free axis."""
    if isinstance(ax, IntervalAxis):
        return np.linspace(-ax.width, ax.width, _odd(search.grid_points))
    window = search.lattice_window
    if window is None:
        window = ax.count - 1 if ax.count <= 129 else 128
    window = min(window, ax.count - 1)
    offs = np.arange(-window, window + 1, dtype=float)
    return offs * ax.step


def _max_over_free(
    spec: VectorBoundSpec,
    pins: np.ndarray,
    pin_axis: int,
    free_idx: Sequence[int],
) -> np.ndarray:
    """max over free-axis offsets of the integrand, per pinned offset.

    pins gives the offset value on pin_axis for each row of the result;
    the remaining axes are scanned on a grid and continuous ones are then
    polished by vectorized ternary search around each row's best point.
    """
    n = spec.prior.n_theta
    n_pin = pins.size
    if not free_idx:
        deltas = np.zeros((n_pin, n))
        deltas[:, pin_axis] = pins
        return _g_rows(spec, deltas)

    cand = [_free_axis_candidates(spec.prior.axes[j], spec.search) for j in free_idx]
    mesh = np.meshgrid(*cand, indexing="ij")
    combos = np.stack([m.ravel() for m in mesh], axis=1)  # (n_c, n_free)
    n_c = combos.shape[0]

    deltas = np.zeros((n_pin, n_c, n))
    deltas[:, :, pin_axis] = pins[:, None]
    for col, j in enumerate(free_idx):
        deltas[:, :, j] = combos[None, :, col]
    vals = _g_rows(spec, deltas.reshape(-1, n)).reshape(n_pin, n_c)
    best_c = np.argmax(vals, axis=1)
    best_val = vals[np.arange(n_pin), best_c]
    best_free = combos[best_c]  # (n_pin, n_free)

    def eval_rows(free_mat: np.ndarray) -> np.ndarray:
        d = np.zeros((n_pin, n))
        d[:, pin_axis] = pins
        for col2, j2 in enumerate(free_idx):
            d[:, j2] = free_mat[:, col2]
        return _g_rows(spec, d)

    for col, j in enumerate(free_idx):
        ax = spec.prior.axes[j]
        if not isinstance(ax, IntervalAxis) or spec.search.refine_iters == 0:
            continue
        spacing = 2.0 * ax.width / (_odd(spec.search.grid_points) - 1)
        lo = np.maximum(best_free[:, col] - spacing, -ax.width)
        hi = np.minimum(best_free[:, col] + spacing, ax.width)
        probe = best_free.copy()
        for _ in range(spec.search.refine_iters):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            probe[:, col] = m1
            f1 = eval_rows(probe)
            probe[:, col] = m2
            f2 = eval_rows(probe)
            take_hi = f1 < f2
            lo = np.where(take_hi, m1, lo)
            hi = np.where(take_hi, hi, m2)
        probe[:, col] = 0.5 * (lo + hi)
        refined = eval_rows(probe)
        improved = refined > best_val
        best_val = np.where(improved, refined, best_val)
        best_free[:, col] = np.where(improved, probe[:, col], best_free[:, col])

    return best_val


def _zzb_vector_scalar_axis(spec: VectorBoundSpec) -> BoundResult:
    ax = spec.prior.axes[0]
    c = float(spec.direction[0])
    if isinstance(ax, IntervalAxis):
        h_max = abs(c) * ax.width

        def f(h: np.ndarray) -> np.ndarray:
            return h * _g_rows(spec, (h / c)[:, None])

        val, conv = _adaptive_1d(f, 0.0, h_max, spec.quadrature)
        return BoundResult(max(val, 0.0), conv, "scalar_reduction")
    offs = np.arange(1, ax.count, dtype=float) * ax.step * math.copysign(1.0, c)
    g_tilde = _g_rows(spec, offs[:, None])
    value = c * c * lattice_staircase_sum(ax.step, ax.count, g_tilde)
    return BoundResult(value, True, "lattice_staircase")


def _zzb_vector_lattice_direction(spec: VectorBoundSpec, pin_axis: int) -> BoundResult:
    ax = spec.prior.axes[pin_axis]
    c = float(spec.direction[pin_axis])
    free_idx = [j for j in range(spec.prior.n_theta) if j != pin_axis]
    offs = np.arange(1, ax.count, dtype=float) * ax.step
    g_pos = _max_over_free(spec, offs, pin_axis, free_idx)
    g_neg = _max_over_free(spec, -offs, pin_axis, free_idx)
    g_tilde = np.maximum(g_pos, g_neg)
    value = c * c * lattice_staircase_sum(ax.step, ax.count, g_tilde)
    return BoundResult(value, True, "lattice_staircase")


def _zzb_vector_continuous_direction(spec: VectorBoundSpec, pin_axis: int) -> BoundResult:
    ax = spec.prior.axes[pin_axis]
    c = float(spec.direction[pin_axis])
    free_idx = [j for j in range(spec.prior.n_theta) if j != pin_axis]
    h_max = abs(c) * ax.width

    def f(h: np.ndarray) -> np.ndarray:
        return h * _max_over_free(spec, h / c, pin_axis, free_idx)

    val, conv = _adaptive_1d(f, 0.0, h_max, spec.quadrature)
    return BoundResult(max(val, 0.0), conv, "continuous_profile")


def _zzb_vector_oblique(spec: VectorBoundSpec) -> BoundResult:
    """General direction over an all-continuous prior via a pivot coordinate."""
    a = spec.direction
    axes = spec.prior.axes
    if any(isinstance(ax, LatticeAxis) for ax in axes):
        raise ValueError("direction must be axis-aligned when the prior has lattice axes")
    pivot = int(np.argmax(np.abs(a)))
    free_idx = [j for j in range(spec.prior.n_theta) if j != pivot]
    h_max = float(np.sum(np.abs(a) * np.array([ax.width for ax in axes])))
    w_piv = axes[pivot].width

    cand = [_free_axis_candidates(axes[j], spec.search) for j in free_idx]
    mesh = np.meshgrid(*cand, indexing="ij")
    combos = np.stack([m.ravel() for m in mesh], axis=1)
    a_free = np.array([a[j] for j in free_idx])

    def g_tilde(h: np.ndarray) -> np.ndarray:
        n_h = h.size
        piv = (h[:, None] - combos @ a_free) / a[pivot]  # (n_h, n_c)
        deltas = np.zeros((n_h, combos.shape[0], spec.prior.n_theta))
        deltas[:, :, pivot] = piv
        for col, j in enumerate(free_idx):
            deltas[:, :, j] = combos[None, :, col]
        flat = deltas.reshape(-1, spec.prior.n_theta)
        feasible = np.abs(flat[:, pivot]) <= w_piv
        vals = np.zeros(flat.shape[0])
        if np.any(feasible):
            vals[feasible] = _g_rows(spec, flat[feasible])
        return np.max(vals.reshape(n_h, -1), axis=1)

    def f(h: np.ndarray) -> np.ndarray:
        return h * g_tilde(h)

    val, conv = _adaptive_1d(f, 0.0, h_max, spec.quadrature)
    return BoundResult(max(val, 0.0), conv, "continuous_profile")


def zzb_vector(spec: VectorBoundSpec) -> BoundResult:
    """Direction-projected bound int_0^inf h max_{a.delta = h} G(delta) dh.

    G is overlap times error probability (or the caller's combined integrand,
    see VectorBoundSpec.pe_includes_prior). Continuous directions integrate
    the offset profile; a lattice direction instead accumulates the exact
    tail-sum over integer offsets (see lattice_staircase_sum), which is the
    rigorous discrete analogue. The returned form field names the route.
    """
    a = spec.direction
    if spec.prior.n_theta == 1:
        return _zzb_vector_scalar_axis(spec)
    nonzero = np.nonzero(a)[0]
    if nonzero.size == 1:
        pin_axis = int(nonzero[0])
        if isinstance(spec.prior.axes[pin_axis], LatticeAxis):
            return _zzb_vector_lattice_direction(spec, pin_axis)
        return _zzb_vector_continuous_direction(spec, pin_axis)
    return _zzb_vector_oblique(spec)
