"""Heteroskedasticity-robust standard errors and confidence intervals.

All estimators target the variance of sqrt(n) times the estimation error,
so the reported standard error is sqrt(sigma2 / n). Getting that factor
wrong is the classic failure mode here; ``VarianceReport.se`` is the only
quantity meant for direct use in confidence intervals.

``hc0``/``hc2``/``hc3`` are the Eicker-Huber-White family computed from
within-arm residuals, with no, square-root, or full leverage inflation.
``dbhc3`` adds an estimable second-order correction built from squared
off-diagonal entries of the full-sample hat matrix; the correction is not
a sum of squares and can turn the estimate negative in pathological
samples, in which case the SE is clamped at zero and flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import LeverageOne
from .estimators import PointEstimate
from .fits import SampleFits
from .linalg import LEVERAGE_TOL
from .population import ObservedSample

SE_METHODS = ("hc0", "hc2", "hc3", "dbhc3")


@dataclass(frozen=True)
class VarianceReport:
    """Variance estimate for sqrt(n) (tau_hat - tau) and its implied SE."""

    sigma2: float
    se: float
    method: str
    clamped: bool = False


def _report(sigma2: float, n: int, method: str) -> VarianceReport:
    clamped = sigma2 < 0.0
    se = math.sqrt(max(sigma2, 0.0) / n)
    return VarianceReport(sigma2, se, method, clamped)


def _group_sum_form(sample: ObservedSample, resid: np.ndarray) -> float:
    """n/(n1(n1-1)) sum_treated r^2 + n/(n0(n0-1)) sum_control r^2."""
    n, n1, n0 = sample.n, sample.n1, sample.n0
    if n1 < 2 or n0 < 2:
        raise LeverageOne("each arm needs at least two units for a variance")
    t = sample.t
    s1 = float(np.sum(t * resid**2))
    s0 = float(np.sum((1 - t) * resid**2))
    return n / (n1 * (n1 - 1)) * s1 + n / (n0 * (n0 - 1)) * s0


def _inflated_residuals(fits: SampleFits, power: float) -> np.ndarray:
    """Within-arm residuals divided by (1 - arm leverage)^power."""
    ehat = fits.unit_residuals()
    if power == 0.0:
        return ehat
    d = 1.0 - fits.unit_arm_leverages()
    if d.min() <= LEVERAGE_TOL:
        raise LeverageOne("a unit has within-arm leverage one")
    return ehat / d**power


def hc0(sample: ObservedSample, fits: SampleFits | None = None) -> VarianceReport:
    """Plain within-arm residual variance estimator."""
    fits = fits or SampleFits(sample)
    sigma2 = _group_sum_form(sample, _inflated_residuals(fits, 0.0))
    return _report(sigma2, sample.n, "hc0")


def hc2(sample: ObservedSample, fits: SampleFits | None = None) -> VarianceReport:
    """Square-root leverage inflation; interpolates hc0 and hc3."""
    fits = fits or SampleFits(sample)
    sigma2 = _group_sum_form(sample, _inflated_residuals(fits, 0.5))
    return _report(sigma2, sample.n, "hc2")


def hc3(sample: ObservedSample, fits: SampleFits | None = None) -> VarianceReport:
    """Full leverage inflation; the jackknife-style member of the family.

    The inflated residual e_i / (1 - P_ii) equals the prediction error of
    unit i under the fit that excludes unit i.
    """
    fits = fits or SampleFits(sample)
    sigma2 = _group_sum_form(sample, _inflated_residuals(fits, 1.0))
    return _report(sigma2, sample.n, "hc3")


def dbhc3(sample: ObservedSample, fits: SampleFits | None = None) -> VarianceReport:
    """hc3 plus the estimable second-order (quadratic-term) correction.

    The three correction sums run over pairs i != j weighted by squared
    entries of the full-sample hat matrix, while the inflated residuals
    keep their within-arm leverages. Computed through the p x p trace
    identity, so no n x n matrix is formed.
    """
    fits = fits or SampleFits(sample)
    s = fits.sample
    n, n1, n0 = s.n, s.n1, s.n0
    base = _group_sum_form(s, _inflated_residuals(fits, 1.0))
    etil = _inflated_residuals(fits, 1.0)
    full = fits.full_gram()
    a = s.t * etil
    c = (1 - s.t) * etil
    corr = (
        (n0**2 * n / n1**4) * full.offdiag_hat_sq_sum(a, a)
        + (n1**2 * n / n0**4) * full.offdiag_hat_sq_sum(c, c)
        - (2 * n / (n0 * n1)) * full.offdiag_hat_sq_sum(a, c)
    )
    return _report(base + corr, n, "dbhc3")


_DISPATCH = {"hc0": hc0, "hc2": hc2, "hc3": hc3, "dbhc3": dbhc3}


def standard_error(
    sample: ObservedSample, method: str, fits: SampleFits | None = None
) -> VarianceReport:
    """Dispatch by method name (one of ``SE_METHODS``)."""
    key = method.lower()
    if key not in _DISPATCH:
        raise ValueError(f"unknown standard error method {method!r}")
    return _DISPATCH[key](sample, fits)


def confidence_interval(
    estimate: PointEstimate, report: VarianceReport, level: float = 0.95
) -> tuple[float, float]:
    """Normal-quantile interval tau_hat +/- z_{(1+level)/2} * se."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    z = float(norm.ppf((1.0 + level) / 2.0))
    return estimate.tau_hat - z * report.se, estimate.tau_hat + z * report.se
