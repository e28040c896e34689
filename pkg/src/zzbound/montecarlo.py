"""Monte Carlo measurement of estimator error and of detector error rates.

Every trial gets its own counter-based generator derived from (seed, trial
index), so results are byte-identical no matter how many worker threads run
the trials; reductions always happen in fixed trial order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .estimators import EstimatorSpec, estimate
from .models import Prior, TrueModel, eval_signal
from .pe_kernel import PeKernel, compute_S

__all__ = [
    "trial_generator",
    "derive_seed",
    "TrialPlan",
    "MseReport",
    "run_mse",
    "PeEstimate",
    "empirical_pe",
]

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """SplitMix64 finalizer; bijective scrambling of a 64-bit word."""
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _M64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _M64
    return z ^ (z >> 31)


def trial_generator(seed: int, index: int) -> np.random.Generator:
    """Independent generator for one (seed, index) pair.

    The 128-bit Philox key is built from two scrambled words of the pair, so
    distinct indices under one seed, and equal indices under distinct seeds,
    give statistically independent streams.
    """
    if index < 0:
        raise ValueError("index must be nonnegative")
    w0 = _mix64((seed + (2 * index + 1) * _GOLDEN) & _M64)
    w1 = _mix64((seed + (2 * index + 2) * _GOLDEN) & _M64)
    return np.random.Generator(np.random.Philox(key=(w1 << 64) | w0))


def derive_seed(base: int, *parts: int) -> int:
    """Stable 64-bit sub-seed from a base seed and a tuple of index parts.

    Used by sweep drivers to give every (grid point, quantity) its own seed
    without any shared RNG state, so rows are reproducible independently of
    evaluation order.
    """
    z = base & _M64
    for p in parts:
        z = _mix64((z + _GOLDEN * (p + 1)) & _M64)
    return z


def _worker_count() -> int:
    env = os.environ.get("ZZBOUND_WORKERS")
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("ZZBOUND_WORKERS must be a positive integer")
        return n
    return os.cpu_count() or 1


@dataclass(frozen=True, eq=False)
class TrialPlan:
    """One Monte Carlo experiment: truth, estimator, prior, and sampling plan.

    theta_true pins the parameter across trials; when None each trial draws
    its own parameter from the prior before drawing the record.
    """

    truth: TrueModel
    estimator: EstimatorSpec
    prior: Prior
    trials: int
    seed: int
    theta_true: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.theta_true is not None:
            th = np.atleast_1d(np.asarray(self.theta_true, dtype=float))
            if th.shape != (self.prior.n_theta,):
                raise ValueError(
                    f"theta_true has shape {th.shape}, prior expects ({self.prior.n_theta},)"
                )
            object.__setattr__(self, "theta_true", th)


@dataclass(frozen=True, eq=False)
class MseReport:
    """Per-coordinate error moments from one Monte Carlo run.

    stderr is the standard error of the mean squared error (sample standard
    deviation of the squared errors over sqrt of the completed trial count).
    valid is False when more than 1% of trials failed.
    """

    mse: np.ndarray
    stderr: np.ndarray
    bias: np.ndarray
    trials: int
    failures: int
    valid: bool = field(default=True)


def run_mse(plan: TrialPlan) -> MseReport:
    """Run the trials (thread-parallel, deterministic) and reduce the errors."""
    n_theta = plan.prior.n_theta
    errors = np.full((plan.trials, n_theta), np.nan)
    ok = np.zeros(plan.trials, dtype=bool)

    def one_trial(i: int) -> None:
        rng = trial_generator(plan.seed, i)
        if plan.theta_true is not None:
            theta = plan.theta_true
        else:
            theta = plan.prior.sample(rng)
        clean = eval_signal(plan.truth.signal, theta)
        x = clean + plan.truth.noise.draw(rng)
        try:
            est = estimate(plan.estimator, x, plan.prior)
        except (ValueError, np.linalg.LinAlgError):
            return
        errors[i] = est - theta
        ok[i] = True

    def run_chunk(indices: range) -> None:
        for i in indices:
            one_trial(i)

    workers = _worker_count()
    if workers == 1 or plan.trials < 2:
        run_chunk(range(plan.trials))
    else:
        chunks = [range(s, min(s + 64, plan.trials)) for s in range(0, plan.trials, 64)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_chunk, chunks))

    failures = int(plan.trials - np.count_nonzero(ok))
    kept = errors[ok]
    if kept.shape[0] == 0:
        nanvec = np.full(n_theta, np.nan)
        return MseReport(nanvec, nanvec.copy(), nanvec.copy(), plan.trials, failures, False)

    sq = kept * kept
    mse = np.mean(sq, axis=0)
    n_ok = kept.shape[0]
    if n_ok > 1:
        stderr = np.std(sq, axis=0, ddof=1) / np.sqrt(n_ok)
    else:
        stderr = np.zeros(n_theta)
    bias = np.mean(kept, axis=0)
    valid = failures <= 0.01 * plan.trials
    return MseReport(mse, stderr, bias, plan.trials, failures, valid)


@dataclass(frozen=True)
class PeEstimate:
    """Monte Carlo error probability of the binary test, with standard error."""

    pe: float
    stderr: float
    trials: int


_MC_CHUNK = 1 << 23  # max elements per draw block


def empirical_pe(
    kernel: PeKernel, theta_o, delta, trials: int, seed: int
) -> PeEstimate:
    """Simulate the assumed-likelihood test between theta_o and theta_o + delta.

    Records are drawn from the true model under each hypothesis in turn (two
    independent substreams of the seed) and pushed through the assumed-model
    log-likelihood ratio; exact ties split half-and-half. The two conditional
    error rates are averaged with equal hypothesis weights.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    theta_o = np.atleast_1d(np.asarray(theta_o, dtype=float))
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    if np.all(delta == 0.0):
        return PeEstimate(0.5, 0.0, trials)

    assumed = kernel.assumed
    truth = kernel.truth
    h0 = eval_signal(assumed.signal, theta_o) + assumed.noise_mean
    h1 = eval_signal(assumed.signal, theta_o + delta) + assumed.noise_mean
    s0 = eval_signal(truth.signal, theta_o)
    s1 = eval_signal(truth.signal, theta_o + delta)
    k = assumed.k
    chunk = max(1, _MC_CHUNK // k)

    def error_rate(sub: int, clean: np.ndarray, sign: float) -> tuple[float, float]:
        rng = trial_generator(seed, sub)
        weights = np.empty(trials)
        done = 0
        while done < trials:
            n = min(chunk, trials - done)
            x = clean[None, :] + truth.noise.draw(rng, size=n)
            # D = ll(theta_o + delta) - ll(theta_o); decide the larger one.
            d = 0.5 * (
                assumed.noise_cov.qf_inv_rows(x - h0[None, :])
                - assumed.noise_cov.qf_inv_rows(x - h1[None, :])
            )
            s = sign * d
            weights[done : done + n] = (s > 0.0) + 0.5 * (s == 0.0)
            done += n
        mean = float(np.mean(weights))
        std = float(np.std(weights, ddof=1)) if trials > 1 else 0.0
        return mean, std

    # Under the first hypothesis an error is deciding for theta_o + delta
    # (d > 0); under the second, deciding for theta_o (d < 0).
    m0, sd0 = error_rate(0, s0, 1.0)
    m1, sd1 = error_rate(1, s1, -1.0)
    pe = 0.5 * (m0 + m1)
    se = 0.5 * float(np.sqrt(sd0 * sd0 / trials + sd1 * sd1 / trials))
    return PeEstimate(pe, se, trials)
