"""One-stop analysis of an observed (possibly stratified) sample.

Computes every requested point estimate, every requested standard error,
and the full grid of t-statistics and confidence intervals, collecting
per-estimator numerical failures instead of aborting so that a report can
still be produced for the estimators that remain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LeverageOne, SingularGram
from .estimators import ESTIMATORS, PointEstimate, estimate
from .fits import SampleFits
from .population import ObservedSample
from .stratified import (
    STRATIFIED_SE_METHODS,
    StratifiedSample,
    stratified_cross_fitted,
    stratified_variance,
)
from .variance import SE_METHODS, VarianceReport, confidence_interval, standard_error

REMEDY_HINT = "reduce covariates or drop estimator"


@dataclass
class EstimateReport:
    """Point estimates, standard errors, and their pairwise inference grid."""

    n: int
    n1: int
    n0: int
    n_covariates: int
    level: float
    stratified: bool = False
    estimates: dict[str, PointEstimate] = field(default_factory=dict)
    estimate_errors: dict[str, str] = field(default_factory=dict)
    ses: dict[str, VarianceReport] = field(default_factory=dict)
    se_errors: dict[str, str] = field(default_factory=dict)
    t_stats: dict[tuple[str, str], float] = field(default_factory=dict)
    cis: dict[tuple[str, str], tuple[float, float]] = field(default_factory=dict)


def _fill_pairs(report: EstimateReport) -> EstimateReport:
    for est_name, pe in report.estimates.items():
        for se_name, vr in report.ses.items():
            key = (est_name, se_name)
            report.t_stats[key] = pe.tau_hat / vr.se if vr.se > 0 else float("inf")
            report.cis[key] = confidence_interval(pe, vr, report.level)
    return report


def analyze_sample(
    sample: ObservedSample,
    estimators=ESTIMATORS,
    se_methods=SE_METHODS,
    level: float = 0.95,
) -> EstimateReport:
    """Run the requested estimators and SE methods on one sample."""
    fits = SampleFits(sample)
    report = EstimateReport(
        n=sample.n,
        n1=sample.n1,
        n0=sample.n0,
        n_covariates=sample.n_covariates,
        level=level,
    )
    for name in estimators:
        try:
            report.estimates[name] = estimate(sample, name, fits)
        except (SingularGram, LeverageOne) as err:
            report.estimate_errors[name] = f"{err} ({REMEDY_HINT})"
    for name in se_methods:
        try:
            report.ses[name.lower()] = standard_error(sample, name, fits)
        except (SingularGram, LeverageOne) as err:
            report.se_errors[name.lower()] = f"{err} ({REMEDY_HINT})"
    return _fill_pairs(report)


def analyze_stratified(
    strat: StratifiedSample,
    estimators=("cf",),
    se_methods=STRATIFIED_SE_METHODS,
    level: float = 0.95,
) -> EstimateReport:
    """Stratified analysis; only the cross-fitted estimator is defined here."""
    report = EstimateReport(
        n=strat.n_total,
        n1=sum(s.n1 for s in strat.strata),
        n0=sum(s.n0 for s in strat.strata),
        n_covariates=strat.strata[0].n_covariates,
        level=level,
        stratified=True,
    )
    for name in estimators:
        if name != "cf":
            report.estimate_errors[name] = "not defined for stratified samples"
            continue
        try:
            report.estimates[name] = stratified_cross_fitted(strat)
        except (SingularGram, LeverageOne) as err:
            report.estimate_errors[name] = f"{err} ({REMEDY_HINT})"
    for name in se_methods:
        key = name.lower()
        if key not in STRATIFIED_SE_METHODS:
            report.se_errors[key] = "not defined for stratified samples"
            continue
        try:
            report.ses[key] = stratified_variance(strat, key)
        except (SingularGram, LeverageOne) as err:
            report.se_errors[key] = f"{err} ({REMEDY_HINT})"
    return _fill_pairs(report)
