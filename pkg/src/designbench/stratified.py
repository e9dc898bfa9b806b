"""Stratified experiments with a small number of large strata.

Each stratum runs its own completely randomized experiment, so estimation
and variance work stratum by stratum and aggregate with the population
share weights c_s = n_s / N. Within a stratum, covariates are re-centered
and all leverage quantities are computed with observations restricted to
that stratum.

The reported standard error follows the square-root-n convention of the
unstratified module: se = sqrt(sum_s c_s^2 sigma2_s / n_s), which for a
single stratum collapses to the unstratified se exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDesign, LeverageOne, SingularGram
from .estimators import PointEstimate, cross_fitted
from .population import ObservedSample
from .variance import VarianceReport, dbhc3, hc3

STRATIFIED_SE_METHODS = ("hc3", "dbhc3")


@dataclass(frozen=True)
class StratifiedSample:
    """Per-stratum observed samples with their population share weights."""

    strata: tuple[ObservedSample, ...]
    labels: tuple

    def __post_init__(self):
        if not self.strata:
            raise InvalidDesign("need at least one stratum")
        if len(self.labels) != len(self.strata):
            raise InvalidDesign("one label per stratum required")

    @property
    def n_total(self) -> int:
        return sum(s.n for s in self.strata)

    @property
    def weights(self) -> np.ndarray:
        """Stratum shares c_s = n_s / N; they sum to one by construction."""
        sizes = np.array([s.n for s in self.strata], dtype=float)
        return sizes / sizes.sum()

    @classmethod
    def from_sample(cls, sample: ObservedSample) -> "StratifiedSample":
        """Split one labeled sample into per-stratum samples.

        Covariates are re-centered within each stratum by the
        ``ObservedSample`` constructor.
        """
        if sample.strata is None:
            raise InvalidDesign("sample carries no stratum labels")
        labels = []
        parts = []
        for lab in np.unique(sample.strata):
            mask = sample.strata == lab
            parts.append(
                ObservedSample(y=sample.y[mask], t=sample.t[mask], X=sample.X[mask])
            )
            labels.append(lab.item() if hasattr(lab, "item") else lab)
        return cls(strata=tuple(parts), labels=tuple(labels))


def _per_stratum(strat: StratifiedSample, func):
    """Apply ``func`` per stratum, annotating failures with the stratum id."""
    out = []
    for label, sub in zip(strat.labels, strat.strata):
        try:
            out.append(func(sub))
        except (SingularGram, LeverageOne) as err:
            raise type(err)(f"stratum {label!r}: {err}") from err
    return out


def stratified_cross_fitted(strat: StratifiedSample) -> PointEstimate:
    """Share-weighted combination of per-stratum cross-fitted estimates."""
    parts = _per_stratum(strat, cross_fitted)
    c = strat.weights
    mu1 = float(np.sum(c * np.array([p.mu1_hat for p in parts])))
    mu0 = float(np.sum(c * np.array([p.mu0_hat for p in parts])))
    return PointEstimate(mu1 - mu0, "cf", mu1, mu0)


def stratified_variance(strat: StratifiedSample, method: str = "hc3") -> VarianceReport:
    """Share-weighted variance estimate for the stratified estimator.

    ``sigma2`` is reported in the sqrt(N)-scaled convention, i.e.
    N * sum_s c_s^2 sigma2_s / n_s, so that se = sqrt(sigma2 / N).
    """
    key = method.lower()
    if key not in STRATIFIED_SE_METHODS:
        raise ValueError(
            f"stratified variance supports {STRATIFIED_SE_METHODS}, got {method!r}"
        )
    func = hc3 if key == "hc3" else dbhc3
    reports = _per_stratum(strat, func)
    c = strat.weights
    sizes = np.array([s.n for s in strat.strata], dtype=float)
    sigma2s = np.array([r.sigma2 for r in reports])
    var_tau = float(np.sum(c**2 * sigma2s / sizes))
    n_total = strat.n_total
    sigma2 = n_total * var_tau
    se = float(np.sqrt(max(var_tau, 0.0)))
    clamped = var_tau < 0.0 or any(r.clamped for r in reports)
    return VarianceReport(sigma2=sigma2, se=se, method=key, clamped=clamped)
