"""Command line entry point: bound, mc, pe, and sweep subcommands.

Each subcommand reads a JSON config, computes, and writes one CSV or JSON
file atomically. Exit status is 0 on success, 2 for a configuration or
schema problem (nothing is written), and 3 for a numerical failure such as
a covariance that is not positive definite.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .estimators import EstimatorSpec, LinearClosedForm, QuasiMLE, SampleMedian
from .experiments import (
    SweepConfig,
    build_example1,
    build_example2,
    build_example3,
    build_example4,
    default_grid,
    run_sweep,
)
from .models import (
    AmplitudePulseMap,
    AssumedModel,
    Covariance,
    DenseCov,
    DiagonalCov,
    GaussianNoise,
    IntervalAxis,
    LatticeAxis,
    LinearMatrixMap,
    LinearVectorMap,
    MixtureNoise,
    Prior,
    ScaledIdentityCov,
    SignalMap,
    TrueModel,
)
from .montecarlo import TrialPlan, empirical_pe, run_mse
from .pe_kernel import (
    PeKernel,
    equal_linear_scalar_profile,
    pe_gaussian,
    pe_mixture,
)
from .zzb import (
    BoundResult,
    QuadratureRule,
    ScalarBoundSpec,
    gamma_from_scenario,
    zzb_closed_form_q_linear,
    zzb_scalar_independent,
    zzb_scalar_symmetric,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(Exception):
    """Configuration or schema problem; maps to exit status 2."""


class NumericalError(Exception):
    """Numerical failure while building or evaluating; exit status 3."""


# ---------------------------------------------------------------------------
# Schema helpers: every accessor carries the JSON field path for diagnostics
# ---------------------------------------------------------------------------


def _fail(path: str, message: str) -> None:
    raise ConfigError(f"{path}: {message}")


def _require(d: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in d:
        _fail(path, f"missing required field {key!r}")
    return d[key]


def _as_dict(value: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(value, dict):
        _fail(path, f"expected an object, got {type(value).__name__}")
    return value


def _as_str(value: Any, path: str, choices: Sequence[str] | None = None) -> str:
    if not isinstance(value, str):
        _fail(path, f"expected a string, got {type(value).__name__}")
    if choices is not None and value not in choices:
        _fail(path, f"expected one of {sorted(choices)}, got {value!r}")
    return value


def _as_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {type(value).__name__}")
    return float(value)


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {type(value).__name__}")
    return int(value)


def _as_number_list(value: Any, path: str, min_len: int = 1) -> list[float]:
    if not isinstance(value, list):
        _fail(path, f"expected an array, got {type(value).__name__}")
    if len(value) < min_len:
        _fail(path, f"expected at least {min_len} entries, got {len(value)}")
    return [_as_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _as_matrix(value: Any, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        _fail(path, "expected a nonempty array of rows")
    rows = [_as_number_list(row, f"{path}[{i}]") for i, row in enumerate(value)]
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        _fail(path, "rows must all have the same length")
    return np.asarray(rows, dtype=float)


def _build(factory: Callable[..., Any], *args: Any, path: str) -> Any:
    """Construct a model object, mapping its validation errors to the config.

    A failed positive-definiteness check is a numerical problem, not a schema
    one, and keeps its own exit status.
    """
    try:
        return factory(*args)
    except ValueError as exc:
        if "positive definite" in str(exc):
            raise NumericalError(str(exc)) from exc
        raise ConfigError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Scenario construction from config
# ---------------------------------------------------------------------------


def _build_signal(spec: Any, path: str) -> SignalMap:
    d = _as_dict(spec, path)
    kind = _as_str(
        _require(d, "type", path),
        f"{path}.type",
        choices=("linear_vector", "linear_matrix", "pulse"),
    )
    if kind == "linear_vector":
        h = _as_number_list(_require(d, "hvec", path), f"{path}.hvec")
        return _build(LinearVectorMap, np.asarray(h), path=path)
    if kind == "linear_matrix":
        m = _as_matrix(_require(d, "matrix", path), f"{path}.matrix")
        return _build(LinearMatrixMap, m, path=path)
    width = _as_int(_require(d, "width", path), f"{path}.width")
    k = _as_int(_require(d, "k", path), f"{path}.k")
    return _build(AmplitudePulseMap, width, k, path=path)


def _build_cov(spec: Any, path: str) -> Covariance:
    d = _as_dict(spec, path)
    kind = _as_str(
        _require(d, "type", path),
        f"{path}.type",
        choices=("scaled_identity", "diagonal", "dense"),
    )
    if kind == "scaled_identity":
        sigma2 = _as_number(_require(d, "sigma2", path), f"{path}.sigma2")
        k = _as_int(_require(d, "k", path), f"{path}.k")
        return _build(ScaledIdentityCov, sigma2, k, path=path)
    if kind == "diagonal":
        diag = _as_number_list(_require(d, "diag", path), f"{path}.diag")
        return _build(DiagonalCov, np.asarray(diag), path=path)
    m = _as_matrix(_require(d, "matrix", path), f"{path}.matrix")
    return _build(DenseCov, m, path=path)


def _build_mean(spec: Any, path: str, k: int) -> np.ndarray:
    if isinstance(spec, list):
        values = _as_number_list(spec, path)
        if len(values) != k:
            _fail(path, f"expected {k} entries to match the observation, got {len(values)}")
        return np.asarray(values)
    return np.full(k, _as_number(spec, path))


def _build_gaussian(spec: Any, path: str, k: int) -> GaussianNoise:
    d = _as_dict(spec, path)
    cov = _build_cov(_require(d, "cov", path), f"{path}.cov")
    mean = _build_mean(d.get("mean", 0.0), f"{path}.mean", k)
    return _build(GaussianNoise, mean, cov, path=path)


def _build_noise(spec: Any, path: str, k: int):
    d = _as_dict(spec, path)
    kind = _as_str(
        _require(d, "type", path), f"{path}.type", choices=("gaussian", "mixture")
    )
    if kind == "gaussian":
        return _build_gaussian(spec, path, k)
    weights = _as_number_list(_require(d, "weights", path), f"{path}.weights")
    comps = _require(d, "components", path)
    if not isinstance(comps, list) or not comps:
        _fail(f"{path}.components", "expected a nonempty array of gaussian components")
    if len(comps) != len(weights):
        _fail(path, f"{len(weights)} weights but {len(comps)} components")
    components = tuple(
        _build_gaussian(c, f"{path}.components[{i}]", k) for i, c in enumerate(comps)
    )
    return _build(MixtureNoise, np.asarray(weights), components, path=path)


def _build_axis(spec: Any, path: str):
    d = _as_dict(spec, path)
    kind = _as_str(
        _require(d, "type", path), f"{path}.type", choices=("interval", "lattice")
    )
    if kind == "interval":
        lo = _as_number(_require(d, "lo", path), f"{path}.lo")
        hi = _as_number(_require(d, "hi", path), f"{path}.hi")
        return _build(IntervalAxis, lo, hi, path=path)
    count = _as_int(_require(d, "count", path), f"{path}.count")
    start = _as_number(d.get("start", 0.0), f"{path}.start")
    step = _as_number(d.get("step", 1.0), f"{path}.step")
    return _build(LatticeAxis, count, start, step, path=path)


def _build_prior(spec: Any, path: str) -> Prior:
    d = _as_dict(spec, path)
    kind = _as_str(
        _require(d, "type", path), f"{path}.type", choices=("interval", "axes")
    )
    if kind == "interval":
        t = _as_number(_require(d, "t", path), f"{path}.t")
        return _build(Prior, (_build(IntervalAxis, 0.0, t, path=path),), path=path)
    axes = _require(d, "axes", path)
    if not isinstance(axes, list) or not axes:
        _fail(f"{path}.axes", "expected a nonempty array of axis objects")
    built = tuple(_build_axis(a, f"{path}.axes[{i}]") for i, a in enumerate(axes))
    return _build(Prior, built, path=path)


@dataclass(frozen=True)
class _Scenario:
    """A parsed scenario plus the bookkeeping the subcommands need."""

    assumed: AssumedModel
    truth: TrueModel
    prior: Prior
    mc_truth: TrueModel
    gamma_case: str


def _scenario_from_preset(d: Mapping[str, Any], path: str, command: str) -> _Scenario:
    example = _as_int(_require(d, "example", path), f"{path}.example")
    if example not in (1, 2, 3, 4):
        _fail(f"{path}.example", f"expected 1, 2, 3, or 4, got {example}")
    if example == 4 and command == "bound":
        _fail(
            f"{path}.example",
            "the pulse scenario has a vector parameter; use the sweep command",
        )
    known = {"example", "variant", "k", "sigma2", "mu_star", "one_minus_omega1", "snr"}
    unknown = set(d) - known
    if unknown:
        _fail(path, f"unknown preset fields {sorted(unknown)}")
    k = _as_int(d["k"], f"{path}.k") if "k" in d else None

    if example == 1:
        sigma2 = _as_number(_require(d, "sigma2", path), f"{path}.sigma2")
        variant = _as_str(
            d.get("variant", "matched"),
            f"{path}.variant",
            choices=("m1", "m2", "matched"),
        )
        scn = _build(build_example1, sigma2, *((k,) if k else ()), path=path)
        if variant not in scn.assumed:
            _fail(
                f"{path}.variant",
                "the white-only model needs sigma2 > 0 to be well defined",
            )
        case = "matched" if variant == "matched" else "mismatch"
        return _Scenario(scn.assumed[variant], scn.truth, scn.prior, scn.truth, case)

    if example == 2:
        mu_star = _as_number(_require(d, "mu_star", path), f"{path}.mu_star")
        variant = _as_str(
            d.get("variant", "mismatched"),
            f"{path}.variant",
            choices=("mismatched", "matched"),
        )
        scn = _build(build_example2, mu_star, *((k,) if k else ()), path=path)
        assumed = scn.assumed
        if variant == "matched":
            assumed = AssumedModel(
                scn.truth.signal, scn.truth.noise.mean.copy(), scn.truth.noise.cov
            )
        case = "matched" if variant == "matched" else "mismatch"
        return _Scenario(assumed, scn.truth, scn.prior, scn.truth, case)

    if example == 3:
        w2 = _as_number(
            _require(d, "one_minus_omega1", path), f"{path}.one_minus_omega1"
        )
        variant = _as_str(
            d.get("variant", "mismatched"), f"{path}.variant", choices=("mismatched",)
        )
        scn = _build(build_example3, 1.0 - w2, *((k,) if k else ()), path=path)
        return _Scenario(
            scn.assumed, scn.truth_mixture, scn.prior, scn.truth_empirical, "mixture"
        )

    snr = _as_number(_require(d, "snr", path), f"{path}.snr")
    variant = _as_str(
        d.get("variant", "mismatched"),
        f"{path}.variant",
        choices=("mismatched", "matched"),
    )
    scn = _build(build_example4, snr, *((k,) if k else ()), path=path)
    assumed = scn.assumed_matched if variant == "matched" else scn.assumed
    return _Scenario(assumed, scn.truth, scn.prior, scn.truth, "mismatch")


def _scenario_from_config(cfg: Mapping[str, Any], path: str, command: str) -> _Scenario:
    d = _as_dict(_require(cfg, "scenario", path), f"{path}.scenario")
    path = f"{path}.scenario"
    if "example" in d:
        return _scenario_from_preset(d, path, command)

    assumed_d = _as_dict(_require(d, "assumed", path), f"{path}.assumed")
    signal = _build_signal(_require(assumed_d, "signal", f"{path}.assumed"), f"{path}.assumed.signal")
    cov = _build_cov(_require(assumed_d, "cov", f"{path}.assumed"), f"{path}.assumed.cov")
    mean = _build_mean(assumed_d.get("mean", 0.0), f"{path}.assumed.mean", signal.k)
    assumed = _build(AssumedModel, signal, mean, cov, path=f"{path}.assumed")

    truth_d = _as_dict(_require(d, "truth", path), f"{path}.truth")
    t_signal = signal
    if "signal" in truth_d:
        t_signal = _build_signal(truth_d["signal"], f"{path}.truth.signal")
    noise = _build_noise(_require(truth_d, "noise", f"{path}.truth"), f"{path}.truth.noise", t_signal.k)
    truth = _build(TrueModel, t_signal, noise, path=f"{path}.truth")

    prior = _build_prior(_require(d, "prior", path), f"{path}.prior")
    if prior.n_theta != signal.n_theta:
        _fail(
            f"{path}.prior",
            f"prior has {prior.n_theta} coordinates, the signal map expects {signal.n_theta}",
        )
    case = "mixture" if isinstance(noise, MixtureNoise) else "mismatch"
    return _Scenario(assumed, truth, prior, truth, case)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _fmt_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def _render(rows: list[dict[str, Any]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(rows[0].keys())
    for row in rows:
        writer.writerow(_fmt_cell(v) for v in row.values())
    return buf.getvalue()


def _write_atomic(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".zzbound-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _scalar_interval_width(prior: Prior, path: str) -> float:
    if prior.n_theta != 1 or not isinstance(prior.axes[0], IntervalAxis):
        _fail(path, "the bound command needs a scalar interval prior")
    ax = prior.axes[0]
    return ax.hi - ax.lo


def _q_linear_applies(scn: _Scenario) -> bool:
    """Closed forms hold for a scalar linear map and centered Gaussian noise.

    "Centered" means every true noise mean equals the assumed one; a mean
    offset breaks the Q(gamma h) shape and needs quadrature.
    """
    if not isinstance(scn.assumed.signal, (LinearVectorMap, LinearMatrixMap)):
        return False
    if scn.assumed.signal.n_theta != 1 or scn.truth.signal is not scn.assumed.signal:
        return False
    noise = scn.truth.noise
    if isinstance(noise, GaussianNoise):
        means = [noise.mean]
    elif isinstance(noise, MixtureNoise):
        means = [c.mean for c in noise.components]
    else:
        return False
    return all(np.array_equal(m, scn.assumed.noise_mean) for m in means)


def _constant_pe(value: float) -> Callable[[np.ndarray], np.ndarray]:
    def pe(h):
        return np.full(np.shape(np.asarray(h, dtype=float)), value)

    return pe


def _mixture_pe_profile(scn: _Scenario) -> Callable[[np.ndarray], np.ndarray]:
    kernel = PeKernel(scn.assumed, scn.truth)
    theta_o = np.zeros(1)

    def pe(h):
        arr = np.atleast_1d(np.asarray(h, dtype=float))
        out = np.array([pe_mixture(kernel, theta_o, np.array([v])) for v in arr])
        return out if np.ndim(h) else out[0]

    return pe


def _cmd_bound(cfg: Mapping[str, Any], args: argparse.Namespace) -> list[dict[str, Any]]:
    known = {"scenario", "method", "pe_constant"}
    unknown = set(cfg) - known
    if unknown:
        _fail("config", f"unknown fields {sorted(unknown)}")
    method = _as_str(
        cfg.get("method", "auto"),
        "config.method",
        choices=("auto", "closed_form", "asymptotic", "quadrature"),
    )
    scn = _scenario_from_config(cfg, "config", "bound")
    t = _scalar_interval_width(scn.prior, "config.scenario.prior")

    pe_constant = None
    if "pe_constant" in cfg:
        pe_constant = _as_number(cfg["pe_constant"], "config.pe_constant")
        if not 0.0 <= pe_constant <= 0.5:
            _fail("config.pe_constant", "expected a probability in [0, 0.5]")
        if method in ("closed_form", "asymptotic"):
            _fail("config.method", "pe_constant only makes sense with quadrature")
        method = "quadrature"

    q_linear = pe_constant is None and _q_linear_applies(scn)
    if method == "auto":
        method = "closed_form" if q_linear else "quadrature"
    if method in ("closed_form", "asymptotic") and not q_linear:
        _fail(
            "config.method",
            f"{method} needs a scalar linear map and centered gaussian or "
            "mixture noise; use quadrature",
        )

    start = time.perf_counter()
    if method == "closed_form":
        gamma = gamma_from_scenario(scn.assumed, scn.truth, scn.gamma_case)
        result = BoundResult(zzb_closed_form_q_linear(gamma, t), True, "closed_form_q_linear")
    elif method == "asymptotic":
        gamma = gamma_from_scenario(scn.assumed, scn.truth, scn.gamma_case)
        result = BoundResult(1.0 / (4.0 * gamma * gamma), True, "asymptotic_q_linear")
    else:
        if pe_constant is not None:
            spec = ScalarBoundSpec(scn.prior, _constant_pe(pe_constant), QuadratureRule())
            result = zzb_scalar_independent(spec)
        elif isinstance(scn.truth.noise, GaussianNoise):
            profile = equal_linear_scalar_profile(PeKernel(scn.assumed, scn.truth))
            spec = ScalarBoundSpec(scn.prior, profile.single_q, QuadratureRule())
            result = zzb_scalar_symmetric(spec)
        elif isinstance(scn.truth.noise, MixtureNoise):
            spec = ScalarBoundSpec(scn.prior, _mixture_pe_profile(scn), QuadratureRule())
            result = zzb_scalar_independent(spec)
        else:
            _fail(
                "config.scenario.truth.noise",
                "quadrature needs gaussian or mixture noise",
            )
    runtime = time.perf_counter() - start
    return [
        {
            "method": result.form,
            "value": float(result.value),
            "converged": bool(result.converged),
            "runtime": runtime,
        }
    ]


def _default_estimator(scn: _Scenario) -> EstimatorSpec:
    if isinstance(scn.assumed.signal, AmplitudePulseMap):
        return QuasiMLE(scn.assumed)
    return LinearClosedForm(scn.assumed)


def _cmd_mc(cfg: Mapping[str, Any], args: argparse.Namespace) -> list[dict[str, Any]]:
    known = {"scenario", "estimator", "trials", "seed", "theta_true"}
    unknown = set(cfg) - known
    if unknown:
        _fail("config", f"unknown fields {sorted(unknown)}")
    scn = _scenario_from_config(cfg, "config", "mc")

    if "estimator" in cfg:
        name = _as_str(
            cfg["estimator"],
            "config.estimator",
            choices=("quasi_mle", "linear_closed_form", "sample_median"),
        )
        estimator: EstimatorSpec
        if name == "quasi_mle":
            estimator = QuasiMLE(scn.assumed)
        elif name == "linear_closed_form":
            estimator = LinearClosedForm(scn.assumed)
        else:
            estimator = SampleMedian()
    else:
        estimator = _default_estimator(scn)

    trials = args.trials
    if trials is None:
        trials = _as_int(cfg.get("trials", 1000), "config.trials")
    if trials < 1:
        _fail("config.trials", f"expected a positive count, got {trials}")
    seed = args.seed
    if seed is None:
        seed = _as_int(cfg.get("seed", 0), "config.seed")

    theta_true = None
    if "theta_true" in cfg:
        values = _as_number_list(cfg["theta_true"], "config.theta_true")
        if len(values) != scn.prior.n_theta:
            _fail(
                "config.theta_true",
                f"expected {scn.prior.n_theta} coordinates, got {len(values)}",
            )
        theta_true = np.asarray(values)

    plan = _build(
        TrialPlan,
        scn.mc_truth,
        estimator,
        scn.prior,
        trials,
        seed,
        theta_true,
        path="config",
    )
    report = run_mse(plan)
    return [
        {
            "coord": i,
            "mse": float(report.mse[i]),
            "stderr": float(report.stderr[i]),
            "bias": float(report.bias[i]),
            "trials": report.trials,
            "failures": report.failures,
            "valid": bool(report.valid),
        }
        for i in range(report.mse.size)
    ]


def _cmd_pe(cfg: Mapping[str, Any], args: argparse.Namespace) -> list[dict[str, Any]]:
    known = {"scenario", "theta", "delta", "method", "trials", "seed"}
    unknown = set(cfg) - known
    if unknown:
        _fail("config", f"unknown fields {sorted(unknown)}")
    scn = _scenario_from_config(cfg, "config", "pe")
    n = scn.prior.n_theta

    theta = np.asarray(_as_number_list(_require(cfg, "theta", "config"), "config.theta"))
    delta = np.asarray(_as_number_list(_require(cfg, "delta", "config"), "config.delta"))
    if theta.size != n:
        _fail("config.theta", f"expected {n} coordinates, got {theta.size}")
    if delta.size != n:
        _fail("config.delta", f"expected {n} coordinates, got {delta.size}")

    method = _as_str(
        cfg.get("method", "analytic"),
        "config.method",
        choices=("analytic", "empirical", "both"),
    )
    trials = args.trials
    if trials is None:
        trials = _as_int(cfg.get("trials", 100_000), "config.trials")
    if trials < 1:
        _fail("config.trials", f"expected a positive count, got {trials}")
    seed = args.seed
    if seed is None:
        seed = _as_int(cfg.get("seed", 0), "config.seed")

    kernel = PeKernel(scn.assumed, scn.truth)
    rows: list[dict[str, Any]] = []
    if method in ("analytic", "both"):
        if isinstance(scn.truth.noise, MixtureNoise):
            value = pe_mixture(kernel, theta, delta)
        else:
            value = pe_gaussian(kernel, theta, delta)
        rows.append({"method": "analytic", "value": float(value), "stderr": 0.0, "trials": 0})
    if method in ("empirical", "both"):
        est = empirical_pe(kernel, theta, delta, trials, seed)
        rows.append(
            {
                "method": "empirical",
                "value": float(est.pe),
                "stderr": float(est.stderr),
                "trials": est.trials,
            }
        )
    return rows


def _cmd_sweep(cfg: Mapping[str, Any], args: argparse.Namespace) -> list[dict[str, Any]]:
    known = {"example", "var", "grid", "k", "trials", "seed"}
    unknown = set(cfg) - known
    if unknown:
        _fail("config", f"unknown fields {sorted(unknown)}")
    example = _as_int(_require(cfg, "example", "config"), "config.example")
    if example not in (1, 2, 3, 4):
        _fail("config.example", f"expected 1, 2, 3, or 4, got {example}")

    if "grid" in cfg:
        grid = tuple(_as_number_list(cfg["grid"], "config.grid", min_len=0))
        if not grid:
            _fail("config.grid", "expected a nonempty grid")
    else:
        grid = default_grid(example)

    overrides: dict[str, int] = {}
    if "k" in cfg:
        overrides["k"] = _as_int(cfg["k"], "config.k")
    trials = args.trials
    if trials is None and "trials" in cfg:
        trials = _as_int(cfg["trials"], "config.trials")
    if trials is not None:
        overrides["trials"] = trials
    seed = args.seed
    if seed is None:
        seed = _as_int(cfg.get("seed", 0), "config.seed")

    var = {1: "sigma2", 2: "mu_star", 3: "one_minus_omega1", 4: "snr"}[example]
    if "var" in cfg:
        var = _as_str(cfg["var"], "config.var", choices=(var,))

    sweep = _build(SweepConfig, example, var, grid, overrides, seed, path="config")
    rows = run_sweep(sweep)
    return [
        {
            "sweep_var": r.sweep_var,
            "sweep_value": float(r.sweep_value),
            "quantity": r.quantity,
            "method": r.method,
            "value": float(r.value),
            "stderr": float(r.stderr),
            "flag": r.flag,
        }
        for r in rows
    ]


_COMMANDS = {
    "bound": _cmd_bound,
    "mc": _cmd_mc,
    "pe": _cmd_pe,
    "sweep": _cmd_sweep,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zzbound",
        description="Evaluate mismatch MSE lower bounds, Monte Carlo baselines, "
        "error probabilities, and full example sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "bound": "evaluate one scalar bound from a scenario config",
        "mc": "estimate an estimator's MSE by Monte Carlo",
        "pe": "evaluate a binary-decision error probability",
        "sweep": "run one of the worked examples over its grid",
    }
    for name, helptext in descriptions.items():
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="path to a JSON config file")
        p.add_argument("--out", required=True, help="output file to write")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument(
            "--trials", type=int, default=None, help="override the config trial count"
        )
        p.add_argument(
            "--format", choices=("csv", "json"), default="csv", help="output format"
        )
    return parser


def _load_config(path: str) -> Mapping[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return _as_dict(raw, "config")


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        rows = _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write_atomic(args.out, _render(rows, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
