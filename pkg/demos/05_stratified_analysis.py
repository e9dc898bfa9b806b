"""Stratified experiment: estimate per stratum, combine by population share.

Two strata with different sizes, treated shares, and outcome equations.
Each stratum is randomized independently; the combined estimate weights
stratum estimates by n_s / N and the variance aggregates with squared
weights.
"""

import numpy as np

from designbench import (
    ObservedSample,
    StratifiedSample,
    confidence_interval,
    stratified_cross_fitted,
    stratified_variance,
)

rng = np.random.default_rng(5)

pieces = []
for label, (n_s, n1_s, shift) in enumerate({0: (120, 30, 0.0), 1: (80, 40, 1.0)}.values()):
    X = rng.normal(size=(n_s, 3)) + shift
    t = np.zeros(n_s, dtype=int)
    t[rng.choice(n_s, n1_s, replace=False)] = 1
    y = X @ np.array([1.0, -0.5, 0.2]) + 0.6 * t + rng.normal(size=n_s)
    pieces.append((y, t, X, np.full(n_s, label)))

sample = ObservedSample(
    y=np.concatenate([p[0] for p in pieces]),
    t=np.concatenate([p[1] for p in pieces]),
    X=np.vstack([p[2] for p in pieces]),
    strata=np.concatenate([p[3] for p in pieces]),
)
strat = StratifiedSample.from_sample(sample)

print("stratum layout:")
for label, sub, weight in zip(strat.labels, strat.strata, strat.weights):
    print(f"  stratum {label}: n={sub.n} treated={sub.n1} weight={weight:.3f}")

estimate = stratified_cross_fitted(strat)
print(f"\nstratified cross-fitted estimate: {estimate.tau_hat:+.4f} (true effect 0.6)")
for method in ("hc3", "dbhc3"):
    report = stratified_variance(strat, method)
    lo, hi = confidence_interval(estimate, report, 0.95)
    print(f"  {method:>6}: se={report.se:.4f}  95% CI [{lo:+.4f}, {hi:+.4f}]")
