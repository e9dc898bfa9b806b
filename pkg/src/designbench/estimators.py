"""Point estimators of the average treatment effect.

Five estimators sharing one sample interface:

``dif``
    Difference in group means; exactly unbiased, ignores covariates.
``adj``
    Regression adjustment with within-arm OLS predictions, written in its
    inverse-probability form with pi = n1/n from the realized design.
``bc``
    Regression adjustment plus the analytic leverage-based correction of
    the leading bias term. The leverage diagonal here comes from the
    full-sample design over all n units.
``cf``
    Cross-fitted regression adjustment: unit i is predicted with the
    within-arm coefficients estimated without unit i, computed through
    the leave-one-out identity rather than n refits.
``unbiased``
    Exactly unbiased correction of ``adj``; its enumeration average over
    all assignments reproduces the true effect to machine precision, at
    the price of potentially much higher variance when covariates are
    plentiful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidDesign, LeverageOne
from .fits import SampleFits
from .linalg import LEVERAGE_TOL
from .population import ObservedSample

ESTIMATORS = ("dif", "adj", "bc", "cf", "unbiased")


@dataclass(frozen=True)
class PointEstimate:
    """A single tau estimate with its group-mean components."""

    tau_hat: float
    estimator: str
    mu1_hat: Optional[float] = None
    mu0_hat: Optional[float] = None


def diff_in_means(sample: ObservedSample) -> PointEstimate:
    """Mean of treated outcomes minus mean of control outcomes."""
    treated = sample.y[sample.t == 1]
    control = sample.y[sample.t == 0]
    mu1 = float(treated.mean())
    mu0 = float(control.mean())
    return PointEstimate(mu1 - mu0, "dif", mu1, mu0)


def _adjusted_mus(fits: SampleFits) -> tuple[float, float]:
    s = fits.sample
    pi = s.pi
    w1 = s.t / pi
    w0 = (1 - s.t) / (1 - pi)
    pred1 = s.design @ fits.arm(1).coefficients
    pred0 = s.design @ fits.arm(0).coefficients
    mu1 = float(np.mean(w1 * s.y - (w1 - 1) * pred1))
    mu0 = float(np.mean(w0 * s.y - (w0 - 1) * pred0))
    return mu1, mu0


def adjusted(sample: ObservedSample, fits: SampleFits | None = None) -> PointEstimate:
    """Regression-adjusted estimator.

    Numerically identical to the coefficient on the treatment indicator
    in the full OLS of the outcome on treatment, centered covariates, and
    their interactions.
    """
    fits = fits or SampleFits(sample)
    mu1, mu0 = _adjusted_mus(fits)
    return PointEstimate(mu1 - mu0, "adj", mu1, mu0)


def bias_corrected(
    sample: ObservedSample, fits: SampleFits | None = None
) -> PointEstimate:
    """Regression adjustment with the analytic leverage correction."""
    fits = fits or SampleFits(sample)
    s = fits.sample
    mu1, mu0 = _adjusted_mus(fits)
    lev = fits.full_gram().leverages()
    ehat = fits.unit_residuals()
    n1, n0 = s.n1, s.n0
    delta1 = float(np.sum(s.t * lev * ehat)) / n1
    delta0 = float(np.sum((1 - s.t) * lev * ehat)) / n0
    mu1_bc = mu1 + (n0 / n1) * delta1
    mu0_bc = mu0 + (n1 / n0) * delta0
    return PointEstimate(mu1_bc - mu0_bc, "bc", mu1_bc, mu0_bc)


def _loo_predictions(fits: SampleFits, t: int) -> np.ndarray:
    """z_i' b_t^(i) for every unit i.

    Removing unit i only changes the arm-t fit when unit i belongs to arm
    t, in which case the leave-one-out identity gives
    z_i' b_t^(i) = z_i' b_t - P_{t,ii} * e_i / (1 - P_{t,ii}).
    """
    s = fits.sample
    fit = fits.arm(t)
    if fit.n <= fit.p:
        raise LeverageOne(
            f"arm t={t} has no spare unit for leave-one-out ({fit.n} units, "
            f"{fit.p} regressors)"
        )
    pred = s.design @ fit.coefficients
    mask = fits.arm_mask(t)
    d = 1.0 - fit.leverages
    if d.min() <= LEVERAGE_TOL:
        raise LeverageOne(f"a unit in arm t={t} has leverage one")
    pred[mask] -= fit.leverages * fit.residuals / d
    return pred


def cross_fitted(
    sample: ObservedSample, fits: SampleFits | None = None
) -> PointEstimate:
    """Cross-fitted regression adjustment via the leave-one-out identity."""
    fits = fits or SampleFits(sample)
    s = fits.sample
    pi = s.pi
    w1 = s.t / pi
    w0 = (1 - s.t) / (1 - pi)
    pred1 = _loo_predictions(fits, 1)
    pred0 = _loo_predictions(fits, 0)
    mu1 = float(np.mean(w1 * s.y - (w1 - 1) * pred1))
    mu0 = float(np.mean(w0 * s.y - (w0 - 1) * pred0))
    return PointEstimate(mu1 - mu0, "cf", mu1, mu0)


def unbiased(sample: ObservedSample, fits: SampleFits | None = None) -> PointEstimate:
    """Exactly unbiased correction of the regression-adjusted estimator.

    Subtracts two estimable pieces per arm: the gap from replacing the
    arm-level Gram matrix by the full-sample one, and an unbiased estimate
    of the remaining own-unit term built from the exact first and second
    assignment moments.
    """
    fits = fits or SampleFits(sample)
    s = fits.sample
    Z, y, t = s.design, s.y, s.t
    n, n1, n0 = s.n, s.n1, s.n0
    pi = s.pi
    mu1, mu0 = _adjusted_mus(fits)

    full = fits.full_gram()
    lev = full.leverages()  # z_i' (Z'Z)^{-1} z_i; scale by n for Sigma^{-1}
    zsum = Z.sum(axis=0)
    ty = t * y
    cy = (1 - t) * y
    w1 = Z.T @ ty
    w0 = Z.T @ cy
    u1 = Z.T @ t / pi - zsum  # sum_i (T_i/pi - 1) z_i
    u0 = Z.T @ (1 - t) / (1 - pi) - zsum

    # Arm-vs-full Gram gap terms (computable exactly from the sample).
    s1 = w1 / n1
    s0 = w0 / n0
    gap1 = n1 * fits.arm(1).gram.solve(s1) - n * full.solve(s1)
    gap0 = n0 * fits.arm(0).gram.solve(s0) - n * full.solve(s0)
    b1_gap = -float(u1 @ gap1) / n
    b0_gap = float(u0 @ gap0) / n

    # Own-unit terms, replaced by their unbiased moment-based estimates.
    quad1 = float(np.sum(ty * n * lev))  # sum_i T_i z_i' Sigma^{-1} z_i Y_i
    quad0 = float(np.sum(cy * n * lev))
    cross1 = float(zsum @ (n * full.solve(w1))) - quad1
    cross0 = float(zsum @ (n * full.solve(w0))) - quad0
    b1_own = -(n0 / (n1**2 * n)) * quad1 + (n0 / (n1**2 * (n - 1) * n)) * cross1
    b0_own = (n1 / (n0**2 * n)) * quad0 - (n1 / (n0**2 * (n - 1) * n)) * cross0

    mu1_unb = mu1 - b1_gap - b1_own
    mu0_unb = mu0 + b0_gap + b0_own
    return PointEstimate(mu1_unb - mu0_unb, "unbiased", mu1_unb, mu0_unb)


_DISPATCH = {
    "dif": lambda s, f: diff_in_means(s),
    "adj": adjusted,
    "bc": bias_corrected,
    "cf": cross_fitted,
    "unbiased": unbiased,
}


def estimate(
    sample: ObservedSample, estimator: str, fits: SampleFits | None = None
) -> PointEstimate:
    """Dispatch by estimator name (one of ``ESTIMATORS``)."""
    if estimator not in _DISPATCH:
        raise InvalidDesign(f"unknown estimator {estimator!r}")
    return _DISPATCH[estimator](sample, fits)
