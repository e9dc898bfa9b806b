"""Theoretical diagnostics computable from the full potential-outcome table.

These quantities exist only in simulation mode, where both potential
outcomes of every unit are known: the exact variance of the first-order
(linear) component of the estimators' error expansion, the leading
expression for the variance of the second-order (quadratic) component,
and the per-assignment bias terms of the adjusted and bias-corrected
estimators. The linear variance is exact finite-sample algebra; the
quadratic variance is the leading term of an asymptotic equivalence, so
enumeration checks against it carry a finite-n tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import GramFactor
from .population import FinitePopulation, population_residuals


@dataclass(frozen=True)
class TheoreticalVariance:
    """Variances of the two stochastic components, scaled by n.

    ``quad_mix`` is the residual combination whose pairwise products,
    weighted by squared hat-matrix entries, drive the quadratic term.
    """

    linear: float
    quadratic: float
    quad_mix: np.ndarray


def quad_mix(pop: FinitePopulation) -> np.ndarray:
    """-e_i(1) + (pi/(1-pi))^2 e_i(0), the quadratic-term residual mix."""
    e1, e0 = population_residuals(pop)
    ratio = pop.n1 / pop.n0
    return -e1 + ratio**2 * e0


def linear_variance(pop: FinitePopulation) -> float:
    """Exact variance of the sqrt(n)-scaled linear component.

    Equal to n times the enumeration variance of the mean linear term;
    the third piece (the effect-heterogeneity sum) is what no observed
    sample can estimate consistently.
    """
    e1, e0 = population_residuals(pop)
    n, n1, n0 = pop.n, pop.n1, pop.n0
    return (
        n / (n1 * (n - 1)) * float(np.sum(e1**2))
        + n / (n0 * (n - 1)) * float(np.sum(e0**2))
        - float(np.sum((e1 - e0) ** 2)) / (n - 1)
    )


def quadratic_variance(pop: FinitePopulation) -> float:
    """Leading expression for the variance of the quadratic component.

    Three leverage-diagonal terms plus a pairwise term in ``quad_mix``
    weighted by squared off-diagonal hat entries.
    """
    e1, e0 = population_residuals(pop)
    n, n1, n0 = pop.n, pop.n1, pop.n0
    gram = GramFactor(pop.design)
    lev = gram.leverages()
    rho = -e1 + (n1 / n0) ** 2 * e0
    diag = (
        (n0**2 / (n1**2 * n)) * float(np.sum(lev * e1**2))
        + (n1**2 / (n0**2 * n)) * float(np.sum(lev * e0**2))
        - (2.0 / n) * float(np.sum(lev * e1 * e0))
    )
    pairwise = (n0**2 / (n1**2 * n)) * gram.offdiag_hat_sq_sum(rho, rho)
    return diag + pairwise


def theoretical_variance(pop: FinitePopulation) -> TheoreticalVariance:
    """Bundle of the linear and quadratic variances with the residual mix."""
    return TheoreticalVariance(
        linear=linear_variance(pop),
        quadratic=quadratic_variance(pop),
        quad_mix=quad_mix(pop),
    )


def linear_terms(pop: FinitePopulation, t: np.ndarray) -> np.ndarray:
    """Per-unit linear component under assignment ``t``.

    (T_i/pi - 1)(e_i(1) + pi/(1-pi) e_i(0)); its enumeration mean is zero
    exactly.
    """
    e1, e0 = population_residuals(pop)
    pi = pop.n1 / pop.n
    g = t / pi - 1.0
    return g * (e1 + pi / (1 - pi) * e0)


def quadratic_total(pop: FinitePopulation, t: np.ndarray) -> float:
    """Mean quadratic component n^{-2} sum_{i<j} W_ij under assignment ``t``.

    Uses the equivalent single-contraction form
    (1/n) sum_{i != j} g_i g_j P_ij rho_j with g_i = T_i/pi - 1.
    """
    rho = quad_mix(pop)
    pi = pop.n1 / pop.n
    g = t / pi - 1.0
    gram = GramFactor(pop.design)
    Z = pop.design
    lev = gram.leverages()
    total = float((Z.T @ g) @ gram.solve(Z.T @ (g * rho)))
    diag = float(np.sum(g**2 * lev * rho))
    return (total - diag) / pop.n


def bias_terms(pop: FinitePopulation, t: np.ndarray) -> tuple[float, float]:
    """Exact bias terms of the adjusted and bias-corrected estimators.

    Both are functions of the realized assignment; the cross-fitted
    estimator's counterpart is identically zero, so no value is returned
    for it. The corrected estimator's term needs the within-arm Gram
    inverses under ``t`` and so can raise ``SingularGram``.
    """
    e1, e0 = population_residuals(pop)
    n, n1, n0 = pop.n, pop.n1, pop.n0
    pi = n1 / n
    t = np.asarray(t, dtype=float)
    g1 = t / pi - 1.0
    g0 = (1.0 - t) / (1.0 - pi) - 1.0
    gram = GramFactor(pop.design)
    lev = gram.leverages()
    Z = pop.design

    b_adj = float(np.mean(-(g1**2) * lev * e1 + g0**2 * lev * e0))

    # First and third pieces of the corrected estimator's term.
    w1 = t / pi
    w0 = (1.0 - t) / (1.0 - pi)
    piece1 = float(np.mean(-(g1**2 - (n0 / n1) * w1) * lev * e1))
    piece3 = float(np.mean((g0**2 - (n1 / n0) * w0) * lev * e0))

    # Arm-level triple products with the population residuals.
    def arm_triple(mask: np.ndarray, e: np.ndarray, n_arm: int) -> float:
        arm_gram = GramFactor(Z[mask])  # raises SingularGram if arm is thin
        a = Z[mask].T @ lev[mask] / n_arm
        b = Z[mask].T @ e[mask] / n_arm
        return float(a @ arm_gram.solve(b)) * n_arm

    mask1 = t == 1.0
    mask0 = ~mask1
    piece2 = -(n0 / n1) * arm_triple(mask1, e1, n1)
    piece4 = (n1 / n0) * arm_triple(mask0, e0, n0)
    b_bc = piece1 + piece2 + piece3 + piece4
    return b_adj, b_bc
