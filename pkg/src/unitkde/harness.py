"""Experiment orchestration.

Experiment 1 is a Monte Carlo study over known densities: every method in
the configuration fits the same per-trial sample (paired comparisons), and
each fit is scored by k-fold LSCV, ISE against the truth where the truth is
quadrature-friendly, and total-mass deviation. Experiment 2 runs the
practical methods on real data columns with repeated k-fold cross-validation,
exact-LOO LSCV on the full sample, and Wilcoxon signed-rank comparisons
against the reference-rule baseline. Also here: TOML config loading, CSV
input/output, and plot-data aggregation. The `cli` module is a thin wrapper
over these functions.
"""

from __future__ import annotations

import csv
import hashlib
import sys
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logit

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .bandwidth import (
    LSCV,
    ORACLE_ISE,
    ORACLE_MISE,
    SILVERMAN,
    BandwidthSelection,
    lscv_optimize,
    minimize_log_bandwidth,
    oracle_bandwidth,
    select_bandwidth,
    silverman_bandwidth,
)
from .distributions import Beta, DistributionSpec, Mixture, TruncNormal
from .errors import (
    ConfigurationError,
    DegenerateSampleError,
    DivergenceError,
    DomainError,
    InsufficientDataError,
    MethodUnavailableError,
)
from .kernels import (
    BETA_F2,
    GAUSS_LOGIT,
    GAUSS_REFLECT,
    DensityModel,
    Sample,
    evaluate,
    make_model,
)
from .metrics import (
    heldout_log_likelihood,
    heldout_mean_density,
    ise,
    lscv_score,
    mass_error,
    wilcoxon_signed_rank,
)
from .quadrature import QuadratureRule, make_rule

__all__ = [
    "BETA_REF",
    "BETA_LSCV",
    "BETA_ISE_MIN",
    "BETA_ORACLE",
    "LOGIT_SILVERMAN",
    "LOGIT_LSCV",
    "LOGIT_ISE_MIN",
    "REFLECT_SILVERMAN",
    "REFLECT_LSCV",
    "REFLECT_ISE_MIN",
    "ALL_METHODS",
    "PRACTICAL_METHODS",
    "ORACLE_METHODS",
    "PLOT_METRICS",
    "LabeledDistribution",
    "ExperimentConfig",
    "RealDataConfig",
    "TrialRecord",
    "LoadReport",
    "derive_seed",
    "run_method",
    "run_experiment1",
    "write_trial_csv",
    "load_column",
    "run_experiment2",
    "aggregate_plot_data",
    "load_config",
]

BETA_REF = "beta-ref"
BETA_LSCV = "beta-lscv"
BETA_ISE_MIN = "beta-ise-min"
BETA_ORACLE = "beta-oracle"
LOGIT_SILVERMAN = "logit-silverman"
LOGIT_LSCV = "logit-lscv"
LOGIT_ISE_MIN = "logit-ise-min"
REFLECT_SILVERMAN = "reflect-silverman"
REFLECT_LSCV = "reflect-lscv"
REFLECT_ISE_MIN = "reflect-ise-min"

ALL_METHODS = (
    BETA_REF,
    BETA_LSCV,
    BETA_ISE_MIN,
    BETA_ORACLE,
    LOGIT_SILVERMAN,
    LOGIT_LSCV,
    LOGIT_ISE_MIN,
    REFLECT_SILVERMAN,
    REFLECT_LSCV,
    REFLECT_ISE_MIN,
)
PRACTICAL_METHODS = (
    BETA_REF,
    BETA_LSCV,
    LOGIT_SILVERMAN,
    LOGIT_LSCV,
    REFLECT_SILVERMAN,
    REFLECT_LSCV,
)
ORACLE_METHODS = frozenset({BETA_ORACLE, BETA_ISE_MIN, LOGIT_ISE_MIN, REFLECT_ISE_MIN})
_ISE_MIN_METHODS = frozenset({BETA_ISE_MIN, LOGIT_ISE_MIN, REFLECT_ISE_MIN})

_METHOD_FAMILY = {
    BETA_REF: BETA_F2,
    BETA_LSCV: BETA_F2,
    BETA_ISE_MIN: BETA_F2,
    BETA_ORACLE: BETA_F2,
    LOGIT_SILVERMAN: GAUSS_LOGIT,
    LOGIT_LSCV: GAUSS_LOGIT,
    LOGIT_ISE_MIN: GAUSS_LOGIT,
    REFLECT_SILVERMAN: GAUSS_REFLECT,
    REFLECT_LSCV: GAUSS_REFLECT,
    REFLECT_ISE_MIN: GAUSS_REFLECT,
}

_CATEGORIES = ("nice", "hard", "tricky")
MISSING_TOKENS = frozenset({"", "?", "NA"})

TRIAL_CSV_COLUMNS = (
    "distribution",
    "method",
    "n",
    "trial",
    "seed",
    "h",
    "used_fallback",
    "fit_time_s",
    "lscv_kfold",
    "ise",
    "mass_err",
)
SUMMARY_CSV_COLUMNS = (
    "label",
    "method",
    "n",
    "h",
    "lscv_exact",
    "fit_time_s",
    "fallback_rate",
    "mean_heldout_density",
    "mean_heldout_loglik",
    "p_density_vs_beta_ref",
    "p_loglik_vs_beta_ref",
)
FOLD_CSV_COLUMNS = (
    "label",
    "method",
    "rep",
    "fold",
    "heldout_mean_density",
    "heldout_log_likelihood",
)
PLOT_METRICS = {
    "ise": "ise",
    "lscv": "lscv_kfold",
    "time": "fit_time_s",
    "bandwidth": "h",
    "mass": "mass_err",
    "fallback": "used_fallback",
}


@dataclass(frozen=True)
class LabeledDistribution:
    """A true density with the label used in output files and its scoring
    category: ISE is recorded only for quadrature-friendly truths, and the
    "hard" densities have no finite oracle bandwidth."""

    label: str
    spec: DistributionSpec
    category: str = "nice"

    def __post_init__(self):
        if not self.label:
            raise ConfigurationError("distribution label must be nonempty")
        if self.category not in _CATEGORIES:
            raise ConfigurationError(
                f"category must be one of {_CATEGORIES}, got {self.category!r}"
            )


@dataclass(frozen=True)
class ExperimentConfig:
    distributions: Tuple[LabeledDistribution, ...]
    sample_sizes: Tuple[int, ...] = (50, 100, 250, 500)
    trials: int = 200
    methods: Tuple[str, ...] = ALL_METHODS
    root_seed: int = 20260814
    quadrature: Tuple[int, int] = (16, 32)
    kurtosis_mode: str = "standard"
    output_path: Optional[str] = None
    kfold_k: int = 10
    clip_epsilon: float = 1e-6

    def __post_init__(self):
        labels = [d.label for d in self.distributions]
        if len(set(labels)) != len(labels):
            raise ConfigurationError("distribution labels must be unique")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if not self.sample_sizes or any(n < 2 for n in self.sample_sizes):
            raise ConfigurationError("sample sizes must be >= 2")
        for m in self.methods:
            if m not in ALL_METHODS:
                raise ConfigurationError(f"unknown method {m!r}")
        if self.kfold_k < 2:
            raise ConfigurationError("kfold_k must be >= 2")


@dataclass(frozen=True)
class RealDataConfig:
    methods: Tuple[str, ...] = PRACTICAL_METHODS
    root_seed: int = 20260814
    quadrature: Tuple[int, int] = (16, 32)
    reps: int = 10
    kfold_k: int = 10
    kurtosis_mode: str = "standard"
    clip_epsilon: float = 1e-6
    loglik_floor: float = 1e-300
    summary_path: Optional[str] = None
    folds_path: Optional[str] = None

    def __post_init__(self):
        for m in self.methods:
            if m in ORACLE_METHODS:
                raise ConfigurationError(
                    f"{m} needs a known true density; real-data runs support "
                    f"the practical methods only"
                )
            if m not in ALL_METHODS:
                raise ConfigurationError(f"unknown method {m!r}")
        if self.reps < 1 or self.kfold_k < 2:
            raise ConfigurationError("need reps >= 1 and kfold_k >= 2")


@dataclass(frozen=True)
class TrialRecord:
    distribution_label: str
    method: str
    n: int
    trial_index: int
    seed: int
    h: float
    used_fallback: Optional[bool]
    fit_time_seconds: float
    lscv_kfold: float
    ise: Optional[float]
    mass_error: Optional[float]


@dataclass(frozen=True)
class LoadReport:
    """A loaded data column plus ingestion counts."""

    sample: Sample
    n_rows: int
    n_missing: int
    n_clamped: int


def derive_seed(root_seed: int, *parts) -> int:
    """Stable 64-bit seed for a labeled work unit: hash of the root seed and
    the unit's identifying parts, so any trial can be reproduced in
    isolation and execution order never matters."""
    text = "|".join([str(int(root_seed)), *(str(p) for p in parts)])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def _logit_values(s: Sample, clip_epsilon: float) -> np.ndarray:
    clipped = np.clip(s.values, clip_epsilon, 1.0 - clip_epsilon)
    return logit(clipped)


def _beta_bracket(n: int) -> Tuple[float, float]:
    return max(0.25 / n, 1e-4), 0.24


def _range_bracket(values: np.ndarray) -> Tuple[float, float]:
    spread = float(np.max(values) - np.min(values))
    if spread <= 0.0:
        raise DegenerateSampleError("zero spread: no usable bandwidth bracket")
    return 1e-3 * spread, spread


def _ise_min_selection(
    method: str,
    s: Sample,
    truth: DistributionSpec,
    rule: QuadratureRule,
    clip_epsilon: float,
) -> BandwidthSelection:
    family = _METHOD_FAMILY[method]
    if family == BETA_F2:
        bracket = _beta_bracket(s.n)
    elif family == GAUSS_LOGIT:
        bracket = _range_bracket(_logit_values(s, clip_epsilon))
    else:
        bracket = _range_bracket(s.values)

    def objective(h: float) -> float:
        model = make_model(family, s, h, clip_epsilon=clip_epsilon)
        return ise(lambda x: evaluate(model, x), truth.pdf, rule)

    try:
        h_best, _ = minimize_log_bandwidth(objective, *bracket)
    except DivergenceError as exc:
        raise MethodUnavailableError(f"{method}: ISE target not integrable: {exc}") from exc
    return BandwidthSelection(h=h_best, method=ORACLE_ISE)


def run_method(
    method: str,
    s: Sample,
    truth: Optional[DistributionSpec],
    cfg,
    rule: Optional[QuadratureRule] = None,
) -> Tuple[DensityModel, BandwidthSelection, float]:
    """Select a bandwidth and build the method's model on one sample.

    Returns (model, selection, fit_time). The fit time is wall clock over
    bandwidth selection plus model construction only; scoring is not
    included. Oracle and ISE-minimizing methods require a known truth, and
    a divergent oracle integral surfaces as MethodUnavailableError.
    """
    if method not in ALL_METHODS:
        raise ConfigurationError(f"unknown method {method!r}")
    if method in ORACLE_METHODS and truth is None:
        raise ConfigurationError(f"{method} requires a known true density")
    if rule is None:
        rule = make_rule(*cfg.quadrature)
    family = _METHOD_FAMILY[method]

    start = time.perf_counter()
    if method == BETA_REF:
        selection = select_bandwidth(s, kurtosis_mode=cfg.kurtosis_mode)
    elif method == BETA_LSCV:
        selection = lscv_optimize(
            s, family, _beta_bracket(s.n), rule, clip_epsilon=cfg.clip_epsilon
        )
    elif method == LOGIT_SILVERMAN:
        h = silverman_bandwidth(_logit_values(s, cfg.clip_epsilon))
        selection = BandwidthSelection(h=h, method=SILVERMAN)
    elif method == REFLECT_SILVERMAN:
        selection = BandwidthSelection(h=silverman_bandwidth(s.values), method=SILVERMAN)
    elif method == LOGIT_LSCV:
        bracket = _range_bracket(_logit_values(s, cfg.clip_epsilon))
        selection = lscv_optimize(s, family, bracket, rule, clip_epsilon=cfg.clip_epsilon)
    elif method == REFLECT_LSCV:
        selection = lscv_optimize(
            s, family, _range_bracket(s.values), rule, clip_epsilon=cfg.clip_epsilon
        )
    elif method == BETA_ORACLE:
        try:
            h = oracle_bandwidth(truth, s.n, variant="h2")
        except DivergenceError as exc:
            raise MethodUnavailableError(f"oracle bandwidth unavailable: {exc}") from exc
        selection = BandwidthSelection(h=h, method=ORACLE_MISE)
    else:
        selection = _ise_min_selection(method, s, truth, rule, cfg.clip_epsilon)
    model = make_model(family, s, selection.h, clip_epsilon=cfg.clip_epsilon)
    fit_time = time.perf_counter() - start
    return model, selection, fit_time


def run_experiment1(cfg: ExperimentConfig) -> List[TrialRecord]:
    """Monte Carlo study over known densities.

    Within each (distribution, n, trial) cell every method fits the same
    sample, drawn from a seed derived from the root seed and the cell
    identity. Methods that are unavailable on a given truth (diverging
    oracle integrals, ISE targets on the boundary-unbounded densities)
    simply contribute no rows. Records are returned, and written when
    cfg.output_path is set, in (distribution, method, n, trial) order.
    """
    rule = make_rule(*cfg.quadrature)
    records: List[TrialRecord] = []
    for dist in cfg.distributions:
        truth = dist.spec
        ise_available = dist.category != "hard"
        for n in cfg.sample_sizes:
            for trial in range(cfg.trials):
                seed = derive_seed(cfg.root_seed, dist.label, n, trial)
                sample = truth.sample(np.random.default_rng(seed), n)
                fold_seed = derive_seed(cfg.root_seed, dist.label, n, trial, "folds")
                for method in cfg.methods:
                    if method in _ISE_MIN_METHODS and not ise_available:
                        continue
                    try:
                        model, selection, fit_time = run_method(
                            method, sample, truth, cfg, rule
                        )
                    except (MethodUnavailableError, DegenerateSampleError):
                        continue
                    kfold = lscv_score(
                        sample,
                        model.family,
                        model.h,
                        rule,
                        mode="kfold",
                        k=cfg.kfold_k,
                        fold_seed=fold_seed,
                        clip_epsilon=cfg.clip_epsilon,
                    )
                    ise_value = None
                    if ise_available:
                        try:
                            ise_value = ise(
                                lambda x: evaluate(model, x), truth.pdf, rule
                            )
                        except DivergenceError:
                            ise_value = None
                    observed_mass, _ = mass_error(model, rule)
                    records.append(
                        TrialRecord(
                            distribution_label=dist.label,
                            method=method,
                            n=n,
                            trial_index=trial,
                            seed=seed,
                            h=selection.h,
                            used_fallback=(
                                selection.used_fallback if method == BETA_REF else None
                            ),
                            fit_time_seconds=fit_time,
                            lscv_kfold=kfold,
                            ise=ise_value,
                            mass_error=observed_mass,
                        )
                    )
    dist_order = {d.label: i for i, d in enumerate(cfg.distributions)}
    method_order = {m: i for i, m in enumerate(cfg.methods)}
    size_order = {n: i for i, n in enumerate(cfg.sample_sizes)}
    records.sort(
        key=lambda r: (
            dist_order[r.distribution_label],
            method_order[r.method],
            size_order[r.n],
            r.trial_index,
        )
    )
    if cfg.output_path is not None:
        write_trial_csv(cfg.output_path, records)
    return records


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_trial_csv(path: str, records: Sequence[TrialRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIAL_CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.distribution_label,
                    r.method,
                    _format_cell(r.n),
                    _format_cell(r.trial_index),
                    _format_cell(r.seed),
                    _format_cell(r.h),
                    _format_cell(r.used_fallback),
                    _format_cell(r.fit_time_seconds),
                    _format_cell(r.lscv_kfold),
                    _format_cell(r.ise),
                    _format_cell(r.mass_error),
                ]
            )


def load_column(csv_path: str, column_name: str, clip_policy: str = "reject") -> LoadReport:
    """Read one numeric column of a headered CSV into a Sample.

    Missing-value tokens ("", "?", "NA") are dropped and counted. Values
    outside [0,1] are an error under clip_policy="reject" and clamped (and
    counted) under "clamp"; anything unparseable is always an error.
    """
    if clip_policy not in ("reject", "clamp"):
        raise ConfigurationError(f"clip_policy must be 'reject' or 'clamp', got {clip_policy!r}")
    values: List[float] = []
    n_missing = 0
    n_clamped = 0
    n_rows = 0
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column_name not in reader.fieldnames:
            raise ConfigurationError(
                f"column {column_name!r} not found in {csv_path} "
                f"(columns: {reader.fieldnames})"
            )
        for line_number, row in enumerate(reader, start=2):
            n_rows += 1
            raw = (row[column_name] or "").strip()
            if raw in MISSING_TOKENS:
                n_missing += 1
                continue
            try:
                x = float(raw)
            except ValueError as exc:
                raise ConfigurationError(
                    f"unparseable value {raw!r} in column {column_name!r} "
                    f"at line {line_number}"
                ) from exc
            if not np.isfinite(x):
                raise ConfigurationError(
                    f"nonfinite value {raw!r} in column {column_name!r} "
                    f"at line {line_number}"
                )
            if x < 0.0 or x > 1.0:
                if clip_policy == "reject":
                    raise DomainError(
                        f"value {x} outside [0,1] in column {column_name!r} "
                        f"at line {line_number} (use clip_policy='clamp' to clamp)"
                    )
                x = min(max(x, 0.0), 1.0)
                n_clamped += 1
            values.append(x)
    if not values:
        raise InsufficientDataError(
            f"column {column_name!r} of {csv_path} has no usable values"
        )
    return LoadReport(
        sample=Sample(np.asarray(values, dtype=float)),
        n_rows=n_rows,
        n_missing=n_missing,
        n_clamped=n_clamped,
    )


def _wilcoxon_or_none(base: np.ndarray, other: np.ndarray) -> Optional[float]:
    mask = np.isfinite(base) & np.isfinite(other)
    try:
        _, p = wilcoxon_signed_rank(np.column_stack([base[mask], other[mask]]))
    except (InsufficientDataError, DomainError):
        return None
    return p


def run_experiment2(
    labeled_samples: Sequence[Tuple[str, Sample]],
    cfg: RealDataConfig,
) -> Tuple[List[dict], List[dict]]:
    """Real-data study: full-sample fits plus repeated k-fold CV.

    For each labeled sample and each practical method this records the
    full-data bandwidth, exact-LOO LSCV, fit time, and the fallback rate
    over the full fit and every fold fit (reference-rule methods only),
    then scores reps x k fold fits by held-out mean density and held-out
    log-likelihood. Each non-baseline method is compared against the
    reference rule with Wilcoxon signed-rank tests over the paired fold
    scores. Returns (summary_rows, fold_rows) as dicts keyed by the CSV
    column names; files are written when the config carries paths.
    """
    rule = make_rule(*cfg.quadrature)
    summary_rows: List[dict] = []
    fold_rows: List[dict] = []
    for label, sample in labeled_samples:
        n = sample.n
        if n < 2 * cfg.kfold_k:
            raise InsufficientDataError(
                f"sample {label!r} too small for {cfg.kfold_k}-fold CV (n={n})"
            )
        n_scores = cfg.reps * cfg.kfold_k
        density_scores: Dict[str, np.ndarray] = {
            m: np.full(n_scores, np.nan) for m in cfg.methods
        }
        loglik_scores: Dict[str, np.ndarray] = {
            m: np.full(n_scores, np.nan) for m in cfg.methods
        }
        fallback_counts = {m: 0 for m in cfg.methods}
        fit_counts = {m: 0 for m in cfg.methods}
        full_fits: Dict[str, Tuple[BandwidthSelection, float, float]] = {}

        for method in cfg.methods:
            model, selection, fit_time = run_method(method, sample, None, cfg, rule)
            lscv_exact = lscv_score(
                sample,
                model.family,
                model.h,
                rule,
                mode="exact_loo",
                clip_epsilon=cfg.clip_epsilon,
            )
            full_fits[method] = (selection, fit_time, lscv_exact)
            fit_counts[method] += 1
            if selection.used_fallback:
                fallback_counts[method] += 1

        keep = np.empty(n, dtype=bool)
        for rep in range(cfg.reps):
            perm = np.random.default_rng(
                derive_seed(cfg.root_seed, label, "cv", rep)
            ).permutation(n)
            for fold_index, fold in enumerate(np.array_split(perm, cfg.kfold_k)):
                keep.fill(True)
                keep[fold] = False
                train = Sample(sample.values[keep])
                heldout = Sample(sample.values[fold])
                slot = rep * cfg.kfold_k + fold_index
                for method in cfg.methods:
                    try:
                        model, selection, _ = run_method(method, train, None, cfg, rule)
                    except (MethodUnavailableError, DegenerateSampleError):
                        continue
                    fit_counts[method] += 1
                    if selection.used_fallback:
                        fallback_counts[method] += 1
                    density_scores[method][slot] = heldout_mean_density(model, heldout)
                    loglik_scores[method][slot] = heldout_log_likelihood(
                        model, heldout, floor=cfg.loglik_floor
                    )

        baseline = BETA_REF if BETA_REF in cfg.methods else None
        for method in cfg.methods:
            selection, fit_time, lscv_exact = full_fits[method]
            d_scores = density_scores[method]
            l_scores = loglik_scores[method]
            p_density = p_loglik = None
            if baseline is not None and method != baseline:
                p_density = _wilcoxon_or_none(density_scores[baseline], d_scores)
                p_loglik = _wilcoxon_or_none(loglik_scores[baseline], l_scores)
            fallback_rate = (
                fallback_counts[method] / fit_counts[method]
                if method == BETA_REF
                else None
            )
            finite_d = d_scores[np.isfinite(d_scores)]
            finite_l = l_scores[np.isfinite(l_scores)]
            summary_rows.append(
                {
                    "label": label,
                    "method": method,
                    "n": n,
                    "h": selection.h,
                    "lscv_exact": lscv_exact,
                    "fit_time_s": fit_time,
                    "fallback_rate": fallback_rate,
                    "mean_heldout_density": (
                        float(np.mean(finite_d)) if finite_d.size else None
                    ),
                    "mean_heldout_loglik": (
                        float(np.mean(finite_l)) if finite_l.size else None
                    ),
                    "p_density_vs_beta_ref": p_density,
                    "p_loglik_vs_beta_ref": p_loglik,
                }
            )
            for rep in range(cfg.reps):
                for fold_index in range(cfg.kfold_k):
                    slot = rep * cfg.kfold_k + fold_index
                    if not np.isfinite(d_scores[slot]):
                        continue
                    fold_rows.append(
                        {
                            "label": label,
                            "method": method,
                            "rep": rep,
                            "fold": fold_index,
                            "heldout_mean_density": d_scores[slot],
                            "heldout_log_likelihood": l_scores[slot],
                        }
                    )

    if cfg.summary_path is not None:
        _write_dict_csv(cfg.summary_path, SUMMARY_CSV_COLUMNS, summary_rows)
    if cfg.folds_path is not None:
        _write_dict_csv(cfg.folds_path, FOLD_CSV_COLUMNS, fold_rows)
    return summary_rows, fold_rows


def _write_dict_csv(path: str, columns: Sequence[str], rows: Sequence[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row[c]) if not isinstance(row[c], str) else row[c] for c in columns])


def aggregate_plot_data(
    input_path: str,
    metric: str,
    output_path: Optional[str] = None,
) -> List[dict]:
    """Aggregate an Experiment-1 results CSV into mean/sd series.

    Groups rows by (distribution, method, n) in first-appearance order and
    reports mean, sample standard deviation, and count of the chosen metric
    over rows where it is present. `fallback` averages the used_fallback
    flags, i.e. the fallback rate.
    """
    if metric not in PLOT_METRICS:
        raise ConfigurationError(
            f"metric must be one of {sorted(PLOT_METRICS)}, got {metric!r}"
        )
    column = PLOT_METRICS[metric]
    groups: Dict[Tuple[str, str, str], List[float]] = {}
    order: List[Tuple[str, str, str]] = []
    with open(input_path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(("distribution", "method", "n", column)) - set(reader.fieldnames or ())
        if missing:
            raise ConfigurationError(
                f"{input_path} lacks required columns {sorted(missing)}"
            )
        for row in reader:
            raw = (row[column] or "").strip()
            if raw == "":
                continue
            if column == "used_fallback":
                value = 1.0 if raw == "true" else 0.0
            else:
                value = float(raw)
            key = (row["distribution"], row["method"], row["n"])
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(value)
    rows = []
    for key in order:
        values = np.asarray(groups[key])
        rows.append(
            {
                "distribution": key[0],
                "method": key[1],
                "n": int(key[2]),
                "mean": float(np.mean(values)),
                "sd": float(np.std(values, ddof=1)) if values.size > 1 else None,
                "count": int(values.size),
            }
        )
    if output_path is not None:
        _write_dict_csv(
            output_path, ("distribution", "method", "n", "mean", "sd", "count"), rows
        )
    return rows


def _parse_distribution_table(table: dict, where: str) -> DistributionSpec:
    try:
        family = table["family"]
    except KeyError:
        raise ConfigurationError(f"{where}: missing 'family'") from None
    if family == "beta":
        return Beta(float(table["a"]), float(table["b"]))
    if family == "truncnormal":
        return TruncNormal(float(table["mu"]), float(table["sigma"]))
    if family == "mixture":
        weights = [float(w) for w in table["weights"]]
        components = [
            _parse_distribution_table(sub, f"{where}.components[{i}]")
            for i, sub in enumerate(table.get("components", ()))
        ]
        if len(components) != len(weights):
            raise ConfigurationError(f"{where}: weights and components differ in length")
        return Mixture(tuple(weights), tuple(components))
    raise ConfigurationError(
        f"{where}: unknown family {family!r} (expected beta, truncnormal, or mixture)"
    )


def load_config(
    path: str,
    seed_override: Optional[int] = None,
    output_override: Optional[str] = None,
) -> ExperimentConfig:
    """Parse a TOML experiment config.

    Top-level keys (all optional except [[distributions]]): trials,
    sample_sizes, methods, root_seed, kurtosis_mode, kfold_k, clip_epsilon,
    output, and a [quadrature] table with panels/order. Each
    [[distributions]] table needs label, family, the family's parameters,
    and an optional category (nice/hard/tricky). Overrides take precedence
    over file values.
    """
    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigurationError(f"invalid TOML in {path}: {exc}") from exc
    if "distributions" not in raw or not raw["distributions"]:
        raise ConfigurationError(f"{path}: at least one [[distributions]] table required")
    dists = []
    for i, table in enumerate(raw["distributions"]):
        where = f"distributions[{i}]"
        if "label" not in table:
            raise ConfigurationError(f"{where}: missing 'label'")
        dists.append(
            LabeledDistribution(
                label=str(table["label"]),
                spec=_parse_distribution_table(table, where),
                category=str(table.get("category", "nice")),
            )
        )
    quad = raw.get("quadrature", {})
    root_seed = int(raw.get("root_seed", 20260814))
    if seed_override is not None:
        root_seed = int(seed_override)
    output_path = raw.get("output")
    if output_override is not None:
        output_path = output_override
    return ExperimentConfig(
        distributions=tuple(dists),
        sample_sizes=tuple(int(n) for n in raw.get("sample_sizes", (50, 100, 250, 500))),
        trials=int(raw.get("trials", 200)),
        methods=tuple(raw.get("methods", ALL_METHODS)),
        root_seed=root_seed,
        quadrature=(int(quad.get("panels", 16)), int(quad.get("order", 32))),
        kurtosis_mode=str(raw.get("kurtosis_mode", "standard")),
        output_path=output_path,
        kfold_k=int(raw.get("kfold_k", 10)),
        clip_epsilon=float(raw.get("clip_epsilon", 1e-6)),
    )
