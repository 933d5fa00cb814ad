"""A small Monte Carlo comparison through the experiment harness.

Runs 25 trials of five methods on two known densities, then aggregates
mean ISE and fit time per method -- a desk-sized version of the full
simulation study in configs/desk.toml. Same-seed reruns are byte-identical
up to wall-clock timing columns.
"""

from collections import defaultdict

import numpy as np

import unitkde as uk
from unitkde.harness import ExperimentConfig, LabeledDistribution, run_experiment1

cfg = ExperimentConfig(
    distributions=(
        LabeledDistribution("beta_5_5", uk.Beta(5.0, 5.0), "nice"),
        LabeledDistribution("beta_2_12", uk.Beta(2.0, 12.0), "nice"),
    ),
    sample_sizes=(100, 250),
    trials=25,
    methods=("beta-ref", "beta-lscv", "beta-oracle", "reflect-silverman", "logit-silverman"),
    root_seed=99,
)

records = run_experiment1(cfg)
print(f"{len(records)} trial records\n")

ise_by = defaultdict(list)
time_by = defaultdict(list)
for r in records:
    if r.ise is not None:
        ise_by[r.method].append(r.ise)
    time_by[r.method].append(r.fit_time_seconds)

print(f"{'method':<20}{'mean ISE':>10}{'sd':>10}{'mean fit time':>16}")
for method in cfg.methods:
    scores = np.array(ise_by[method])
    times = np.array(time_by[method])
    print(f"{method:<20}{scores.mean():10.5f}{scores.std(ddof=1):10.5f}"
          f"{times.mean() * 1e3:13.3f} ms")

# Paired tests use the shared per-trial samples: every method saw the same
# draws, so per-trial ISE differences are meaningful.
ref = np.array(ise_by["beta-ref"])
silv = np.array(ise_by["reflect-silverman"])
stat, p = uk.paired_t_test(np.column_stack([ref, silv]))
print(f"\npaired t, beta-ref vs reflect-silverman ISE: t = {stat:.2f}, p = {p:.2e}")
w_stat, w_p = uk.wilcoxon_signed_rank(np.column_stack([ref, silv]))
print(f"Wilcoxon signed-rank:                        W = {w_stat:.1f}, p = {w_p:.2e}")
