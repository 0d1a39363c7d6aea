"""Replicated simulation sweeps: fit an estimator, score it, fit rate slopes.

A sweep runs ``replicates`` independent datasets at each value of one axis
(n, d, lambda or s), scores every fitted classifier (quadrature by default,
so rate experiments carry no loss-estimation noise), and summarizes mean
loss per axis value with a log-log slope fit. Replicate seeds are derived
from the master seed by index, so serial and parallel executions produce
identical results.
"""

from __future__ import annotations

import json
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats as _stats

from .errors import ConfigError, DomainError, TooFewPoints
from .estimators import oracle_support_pca, pca_classifier, sparse_pca_classifier
from .loss import loss_exact_linear, loss_monte_carlo
from .model import MixtureParams, sample, stream_seed

__all__ = [
    "ExperimentConfig",
    "SweepRow",
    "SweepSummary",
    "SweepResult",
    "signal_vector",
    "theta_for",
    "run_experiment",
    "fit_rate",
    "emit_report",
    "load_config",
    "read_report_json",
    "CSV_COLUMNS",
]

ESTIMATORS = ("dense_pca", "sparse_pca", "oracle_support_pca")
PROFILES = ("equal_coords", "single_coord", "custom")
AXES = ("n", "d", "lambda", "s")
LOSS_METHODS = ("quadrature", "monte_carlo")

CSV_COLUMNS = [
    "axis",
    "axis_value",
    "replicate",
    "seed",
    "n",
    "d",
    "s",
    "lambda",
    "sigma",
    "estimator",
    "loss",
    "loss_method",
    "degenerate",
    "runtime_ms",
]

_CONFIG_KEYS = {
    "estimator",
    "n",
    "d",
    "s",
    "lambda",
    "sigma",
    "signal_profile",
    "custom_signal",
    "replicates",
    "master_seed",
    "loss_method",
    "mc_samples",
    "sweep",
    "quad_tol",
}


@dataclass(frozen=True)
class ExperimentConfig:
    estimator: str
    n: int
    d: int
    lam: float
    sigma: float = 1.0
    s: int | None = None
    signal_profile: str = "equal_coords"
    custom_signal: tuple[float, ...] | None = None
    replicates: int = 1
    master_seed: int = 0
    loss_method: str = "quadrature"
    mc_samples: int = 100_000
    quad_tol: float = 1e-8
    sweep_axis: str | None = None
    sweep_values: tuple[float, ...] | None = None

    def __post_init__(self):
        for name in ("n", "d", "replicates", "master_seed", "mc_samples"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.s is not None:
            object.__setattr__(self, "s", int(self.s))
        for name in ("lam", "sigma", "quad_tol"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.custom_signal is not None:
            object.__setattr__(self, "custom_signal", tuple(float(v) for v in self.custom_signal))
        if self.estimator not in ESTIMATORS:
            raise ConfigError(f"estimator must be one of {ESTIMATORS}, got {self.estimator!r}")
        if self.signal_profile not in PROFILES:
            raise ConfigError(f"signal_profile must be one of {PROFILES}, got {self.signal_profile!r}")
        if self.loss_method not in LOSS_METHODS:
            raise ConfigError(f"loss_method must be one of {LOSS_METHODS}, got {self.loss_method!r}")
        if int(self.replicates) < 1:
            raise ConfigError(f"replicates must be >= 1, got {self.replicates}")
        if int(self.n) < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}")
        if int(self.d) < 1:
            raise ConfigError(f"d must be >= 1, got {self.d}")
        if float(self.lam) <= 0:
            raise ConfigError(f"lambda must be positive, got {self.lam}")
        if float(self.sigma) <= 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.sweep_axis is not None:
            if self.sweep_axis not in AXES:
                raise ConfigError(f"sweep.axis must be one of {AXES}, got {self.sweep_axis!r}")
            vals = tuple(float(v) for v in (self.sweep_values or ()))
            if len(vals) < 1:
                raise ConfigError("sweep.values must be nonempty")
            if any(v <= 0 for v in vals):
                raise ConfigError("sweep.values must be positive")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ConfigError("sweep.values must be strictly increasing")
            object.__setattr__(self, "sweep_values", vals)
        # resolve the signal profile so inconsistencies fail fast
        signal_vector(self.profile_spec(), self.d, self.lam)

    def profile_spec(self) -> tuple[str, tuple[float, ...] | None, int | None]:
        return (self.signal_profile, self.custom_signal, self.s)


@dataclass(frozen=True)
class SweepRow:
    axis: str
    axis_value: float
    replicate: int
    seed: int
    n: int
    d: int
    s: int | None
    lam: float
    sigma: float
    estimator: str
    loss: float
    loss_method: str
    degenerate: bool
    runtime_ms: float


@dataclass(frozen=True)
class SweepSummary:
    axis_value: float
    mean_loss: float
    std_err: float
    replicates: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    summary: tuple[SweepSummary, ...]
    fitted_slope: float | None = None
    slope_ci95: tuple[float, float] | None = None
    config: ExperimentConfig | None = None


def signal_vector(profile_spec, d: int, lam: float) -> np.ndarray:
    """Half-separation vector h from a signal profile: ||h|| = lambda/2.

    equal_coords spreads the separation over the first s coordinates,
    single_coord puts it all on the first, custom takes h verbatim.
    """
    profile, custom, s = profile_spec
    d = int(d)
    lam = float(lam)
    if profile == "single_coord":
        if s is not None and int(s) != 1:
            raise ConfigError(f"single_coord requires s = 1, got s = {s}")
        h = np.zeros(d)
        h[0] = lam / 2.0
        return h
    if profile == "equal_coords":
        s_eff = d if s is None else int(s)
        if not (1 <= s_eff <= d):
            raise ConfigError(f"s must lie in [1, d], got s = {s_eff}, d = {d}")
        h = np.zeros(d)
        h[:s_eff] = lam / (2.0 * math.sqrt(s_eff))
        return h
    # custom
    if custom is None:
        raise ConfigError("custom signal_profile requires custom_signal")
    h = np.asarray(custom, dtype=np.float64)
    if h.shape != (d,):
        raise ConfigError(f"custom_signal must have length d = {d}, got {h.shape}")
    if abs(2.0 * float(np.linalg.norm(h)) - lam) > 1e-9 * max(lam, 1.0):
        raise ConfigError(f"custom_signal norm {np.linalg.norm(h):.6g} inconsistent with lambda = {lam}")
    if s is not None and int(np.count_nonzero(h)) != int(s):
        raise ConfigError(f"custom_signal has {np.count_nonzero(h)} nonzeros, s = {s}")
    return h


def theta_for(config: ExperimentConfig, axis: str | None, value: float | None) -> tuple[MixtureParams, int, int]:
    """Mixture parameters, sample size and sparsity at one sweep point."""
    n, d, lam, s = config.n, config.d, config.lam, config.s
    if axis == "n":
        n = int(round(value))
    elif axis == "d":
        d = int(round(value))
    elif axis == "lambda":
        lam = float(value)
    elif axis == "s":
        s = int(round(value))
    h = signal_vector((config.signal_profile, config.custom_signal, s), d, lam)
    theta = MixtureParams(-h, h, config.sigma)
    return theta, int(n), (int(s) if s is not None else None)


def _run_one(config: ExperimentConfig, axis: str, value: float, replicate: int, index: int) -> SweepRow:
    theta, n, s = theta_for(config, axis if axis != "none" else None, value)
    seed = stream_seed(config.master_seed, index)
    t0 = time.perf_counter()
    ds = sample(theta, n, seed)
    if config.estimator == "dense_pca":
        clf = pca_classifier(ds)
    elif config.estimator == "sparse_pca":
        clf, _ = sparse_pca_classifier(ds)
    else:
        clf = oracle_support_pca(ds, theta)
    if config.loss_method == "quadrature":
        est = loss_exact_linear(theta, clf, tol=config.quad_tol)
    else:
        est = loss_monte_carlo(theta, clf.predict, config.mc_samples, stream_seed(seed, 1))
    runtime_ms = (time.perf_counter() - t0) * 1000.0
    return SweepRow(
        axis=axis,
        axis_value=float(value),
        replicate=replicate,
        seed=seed,
        n=n,
        d=theta.d,
        s=s,
        lam=theta.separation,
        sigma=config.sigma,
        estimator=config.estimator,
        loss=est.value,
        loss_method=config.loss_method,
        degenerate=clf.degenerate,
        runtime_ms=runtime_ms,
    )


def _default_threads() -> int:
    env = os.environ.get("MIXBENCH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"MIXBENCH_THREADS must be an integer, got {env!r}") from exc
    return 1


def run_experiment(config: ExperimentConfig, threads: int | None = None) -> SweepResult:
    """Run the configured sweep; aggregation is order-independent, so serial
    and parallel executions give identical sorted rows."""
    if threads is None:
        threads = _default_threads()
    threads = max(1, int(threads))
    if config.sweep_axis is None:
        axis, values = "none", (float(config.n),)
    else:
        axis, values = config.sweep_axis, config.sweep_values
    if config.estimator == "dense_pca":
        for value in values:
            _, n_pt, _ = theta_for(config, axis if axis != "none" else None, value)
            d_pt = int(round(value)) if axis == "d" else config.d
            if n_pt < 4 * d_pt:
                warnings.warn(f"dense estimator with n = {n_pt} < 4d = {4 * d_pt}: outside the guarantee's range")
                break
    tasks = []
    for a_idx, value in enumerate(values):
        for r in range(config.replicates):
            tasks.append((value, r, a_idx * config.replicates + r))
    if threads == 1:
        rows = [_run_one(config, axis, v, r, i) for (v, r, i) in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda t: _run_one(config, axis, t[0], t[1], t[2]), tasks))
    rows.sort(key=lambda r: (r.axis_value, r.replicate))

    summaries = []
    for value in values:
        losses = np.array([r.loss for r in rows if r.axis_value == float(value)])
        se = float(losses.std(ddof=1) / math.sqrt(losses.size)) if losses.size > 1 else 0.0
        summaries.append(
            SweepSummary(axis_value=float(value), mean_loss=float(losses.mean()), std_err=se, replicates=losses.size)
        )

    slope = None
    ci = None
    if len(values) >= 2:
        pts = []
        for sm in summaries:
            y = sm.mean_loss
            if y <= 0.0:
                if config.loss_method == "monte_carlo":
                    y = 1.0 / (2.0 * config.mc_samples)  # floor for log fitting
                else:
                    continue  # drop exact zeros from the fit
            pts.append((sm.axis_value, y))
        if len({x for x, _ in pts}) >= 2:
            slope, _, ci = fit_rate(pts)
    return SweepResult(rows=tuple(rows), summary=tuple(summaries), fitted_slope=slope, slope_ci95=ci, config=config)


def fit_rate(points) -> tuple[float, float, tuple[float, float]]:
    """Ordinary least squares of log y on log x; returns (slope, intercept,
    ci95) with the usual slope-variance interval."""
    pts = [(float(x), float(y)) for x, y in points]
    if len({x for x, _ in pts}) < 2:
        raise TooFewPoints("need at least 2 distinct x values")
    for x, y in pts:
        if x <= 0 or y <= 0:
            raise DomainError(f"fit_rate needs positive coordinates, got ({x}, {y})")
    lx = np.log([x for x, _ in pts])
    ly = np.log([y for _, y in pts])
    n = lx.size
    xbar = lx.mean()
    sxx = float(np.sum((lx - xbar) ** 2))
    slope = float(np.sum((lx - xbar) * (ly - ly.mean())) / sxx)
    intercept = float(ly.mean() - slope * xbar)
    resid = ly - (intercept + slope * lx)
    dof = n - 2
    if dof <= 0:
        return slope, intercept, (slope, slope)
    s2 = float(np.sum(resid**2) / dof)
    se = math.sqrt(s2 / sxx)
    if se == 0.0:
        return slope, intercept, (slope, slope)
    tq = float(_stats.t.ppf(0.975, dof))
    return slope, intercept, (slope - tq * se, slope + tq * se)


def _row_values(row: SweepRow, include_timing: bool) -> list[str]:
    return [
        row.axis,
        repr(row.axis_value),
        str(row.replicate),
        str(row.seed),
        str(row.n),
        str(row.d),
        "" if row.s is None else str(row.s),
        repr(row.lam),
        repr(row.sigma),
        row.estimator,
        repr(row.loss),
        row.loss_method,
        str(row.degenerate).lower(),
        repr(row.runtime_ms) if include_timing else "0.0",
    ]


def emit_report(result: SweepResult, fmt: str, path, include_timing: bool = False) -> None:
    """Write the sweep to CSV or JSON, ending with a summary block.

    Timing is zeroed by default so the emitted bytes are a pure function of
    the configuration; pass include_timing=True to keep measured runtimes
    (at the cost of byte-level reproducibility).
    """
    if fmt not in ("csv", "json"):
        raise DomainError(f"format must be csv or json, got {fmt!r}")
    path = str(path)
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        for row in result.rows:
            lines.append(",".join(_row_values(row, include_timing)))
        for sm in result.summary:
            lines.append(
                f"# summary,axis_value={sm.axis_value!r},mean_loss={sm.mean_loss!r},"
                f"std_err={sm.std_err!r},replicates={sm.replicates}"
            )
        slope = "" if result.fitted_slope is None else repr(result.fitted_slope)
        ci = "" if result.slope_ci95 is None else f"{result.slope_ci95[0]!r}:{result.slope_ci95[1]!r}"
        lines.append(f"# fitted_slope,{slope},ci95,{ci}")
        text = "\n".join(lines) + "\n"
    else:
        obj = {
            "rows": [
                {
                    "axis": r.axis,
                    "axis_value": r.axis_value,
                    "replicate": r.replicate,
                    "seed": r.seed,
                    "n": r.n,
                    "d": r.d,
                    "s": r.s,
                    "lambda": r.lam,
                    "sigma": r.sigma,
                    "estimator": r.estimator,
                    "loss": r.loss,
                    "loss_method": r.loss_method,
                    "degenerate": r.degenerate,
                    "runtime_ms": r.runtime_ms if include_timing else 0.0,
                }
                for r in result.rows
            ],
            "summary": [
                {
                    "axis_value": s.axis_value,
                    "mean_loss": s.mean_loss,
                    "std_err": s.std_err,
                    "replicates": s.replicates,
                }
                for s in result.summary
            ],
            "fitted_slope": result.fitted_slope,
            "slope_ci95": list(result.slope_ci95) if result.slope_ci95 else None,
        }
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    with open(path, "w") as fh:
        fh.write(text)


def read_report_json(path) -> SweepResult:
    """Re-read a JSON report into a SweepResult (inverse of emit_report)."""
    with open(str(path)) as fh:
        obj = json.load(fh)
    rows = tuple(
        SweepRow(
            axis=r["axis"],
            axis_value=float(r["axis_value"]),
            replicate=int(r["replicate"]),
            seed=int(r["seed"]),
            n=int(r["n"]),
            d=int(r["d"]),
            s=None if r["s"] is None else int(r["s"]),
            lam=float(r["lambda"]),
            sigma=float(r["sigma"]),
            estimator=r["estimator"],
            loss=float(r["loss"]),
            loss_method=r["loss_method"],
            degenerate=bool(r["degenerate"]),
            runtime_ms=float(r["runtime_ms"]),
        )
        for r in obj["rows"]
    )
    summary = tuple(
        SweepSummary(
            axis_value=float(s["axis_value"]),
            mean_loss=float(s["mean_loss"]),
            std_err=float(s["std_err"]),
            replicates=int(s["replicates"]),
        )
        for s in obj["summary"]
    )
    ci = obj.get("slope_ci95")
    return SweepResult(
        rows=rows,
        summary=summary,
        fitted_slope=obj.get("fitted_slope"),
        slope_ci95=tuple(ci) if ci else None,
    )


def load_config(path_or_dict) -> ExperimentConfig:
    """Parse a flat JSON config; unknown keys are rejected by name."""
    if isinstance(path_or_dict, dict):
        obj = dict(path_or_dict)
    else:
        with open(str(path_or_dict)) as fh:
            obj = json.load(fh)
    unknown = set(obj) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("estimator", "n", "d", "lambda"):
        if key not in obj:
            raise ConfigError(f"missing required config key {key!r}")
    sweep = obj.get("sweep")
    sweep_axis = None
    sweep_values = None
    if sweep is not None:
        if not isinstance(sweep, dict) or set(sweep) - {"axis", "values"}:
            raise ConfigError("sweep must be an object with keys 'axis' and 'values'")
        sweep_axis = sweep.get("axis")
        sweep_values = tuple(sweep.get("values", ()))
    custom = obj.get("custom_signal")
    return ExperimentConfig(
        estimator=obj["estimator"],
        n=int(obj["n"]),
        d=int(obj["d"]),
        lam=float(obj["lambda"]),
        sigma=float(obj.get("sigma", 1.0)),
        s=None if obj.get("s") is None else int(obj["s"]),
        signal_profile=obj.get("signal_profile", "equal_coords"),
        custom_signal=None if custom is None else tuple(float(v) for v in custom),
        replicates=int(obj.get("replicates", 1)),
        master_seed=int(obj.get("master_seed", 0)),
        loss_method=obj.get("loss_method", "quadrature"),
        mc_samples=int(obj.get("mc_samples", 100_000)),
        quad_tol=float(obj.get("quad_tol", 1e-8)),
        sweep_axis=sweep_axis,
        sweep_values=sweep_values,
    )
