"""Finite-population data model and randomization.

The inferential target is a fixed table of potential outcomes; the only
randomness is which units land in the treatment group. This module holds
that table, draws complete-randomization assignments (a uniformly random
size-n1 subset), enumerates all of them exactly for oracle checks, and
reports the leverage/residual diagnostics that govern when the asymptotic
theory is trustworthy.

Treatment assignments are plain 0/1 integer arrays of length n summing to
n1; no wrapper class is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional

import numpy as np

from .errors import InvalidDesign, TooLarge
from .linalg import GramFactor, design_matrix, ols_fit

# Default ceiling on the number of assignments an exhaustive sweep may visit.
ENUMERATION_CAP = 10**6


def _center_columns(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] > 0:
        X = X - X.mean(axis=0)
    X = np.ascontiguousarray(X)
    X.flags.writeable = False
    return X


def as_generator(seed) -> np.random.Generator:
    """Accept an int seed or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class FinitePopulation:
    """Fixed potential-outcome table with covariates and a design size.

    Covariate columns are centered to mean zero at construction; every
    estimator downstream assumes this normalization, and centering is
    idempotent so re-ingesting a population is harmless.

    Attributes
    ----------
    y1, y0 : ndarray of shape (n,)
        Potential outcomes under treatment and control.
    X : ndarray of shape (n, k)
        Covariates, stored centered. ``k`` may be zero.
    n1 : int
        Number of treated units in the design.
    """

    y1: np.ndarray
    y0: np.ndarray
    X: np.ndarray
    n1: int

    def __post_init__(self):
        y1 = np.asarray(self.y1, dtype=float)
        y0 = np.asarray(self.y0, dtype=float)
        X = _center_columns(self.X)
        n = y1.shape[0]
        if y1.ndim != 1 or y0.shape != (n,) or X.shape[0] != n:
            raise InvalidDesign("y1, y0, and X must agree on the number of units")
        if n < 2:
            raise InvalidDesign("population needs at least two units")
        if not 1 <= self.n1 <= n - 1:
            raise InvalidDesign(f"n1 must be in [1, n-1], got n1={self.n1}, n={n}")
        for arr in (y1, y0):
            arr.flags.writeable = False
        object.__setattr__(self, "y1", y1)
        object.__setattr__(self, "y0", y0)
        object.__setattr__(self, "X", X)

    @property
    def n(self) -> int:
        return self.y1.shape[0]

    @property
    def n0(self) -> int:
        return self.n - self.n1

    @property
    def n_covariates(self) -> int:
        return self.X.shape[1]

    @property
    def tau(self) -> float:
        """Average treatment effect over the fixed population."""
        return float(np.mean(self.y1 - self.y0))

    @cached_property
    def design(self) -> np.ndarray:
        """Intercept-plus-covariates design over all n units."""
        Z = design_matrix(self.X)
        Z.flags.writeable = False
        return Z

    def observe(self, t: np.ndarray) -> "ObservedSample":
        """Reveal the outcomes a researcher would see under assignment ``t``."""
        t = np.asarray(t)
        if t.shape != (self.n,) or int(t.sum()) != self.n1:
            raise InvalidDesign("assignment does not match the population design")
        y = np.where(t == 1, self.y1, self.y0)
        return ObservedSample(y=y, t=t, X=self.X)


@dataclass(frozen=True)
class ObservedSample:
    """What is actually observed: outcomes, assignment, covariates, strata.

    Covariates are re-centered at construction (a no-op when already
    centered). Stratum labels, when present, are integer codes; each
    stratum must contain at least one treated and one control unit.
    """

    y: np.ndarray
    t: np.ndarray
    X: np.ndarray
    strata: Optional[np.ndarray] = None

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        t = np.asarray(self.t)
        if not np.isin(t, (0, 1)).all():
            raise InvalidDesign("treatment vector must be strictly 0/1")
        t = t.astype(np.int64)
        X = _center_columns(self.X)
        n = y.shape[0]
        if t.shape != (n,) or X.shape[0] != n:
            raise InvalidDesign("y, t, and X must agree on the number of units")
        strata = self.strata
        if strata is not None:
            strata = np.asarray(strata)
            if strata.shape != (n,):
                raise InvalidDesign("stratum labels must have one entry per unit")
            groups = [t[strata == s] for s in np.unique(strata)]
        else:
            groups = [t]
        for g in groups:
            if g.sum() < 1 or (1 - g).sum() < 1:
                raise InvalidDesign(
                    "each stratum (or the whole sample) needs at least one "
                    "treated and one control unit"
                )
        y.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "strata", strata)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def n1(self) -> int:
        return int(self.t.sum())

    @property
    def n0(self) -> int:
        return self.n - self.n1

    @property
    def pi(self) -> float:
        """Realized treated share n1/n (never a user-supplied probability)."""
        return self.n1 / self.n

    @property
    def n_covariates(self) -> int:
        return self.X.shape[1]

    @cached_property
    def design(self) -> np.ndarray:
        Z = design_matrix(self.X)
        Z.flags.writeable = False
        return Z


@dataclass(frozen=True)
class PopulationDiagnostics:
    """Finite-sample quantities behind the asymptotic regularity conditions.

    Reported, never enforced: the theory states rate conditions on these,
    but gives no finite-sample thresholds.
    """

    max_leverage: float
    max_residual_msq: float  # worst arm mean squared population residual
    max_residual_abs: float  # worst absolute population residual
    residual_correlation: float  # correlation of the two residual vectors

    leverages: np.ndarray = field(repr=False, default=None)


def sample_assignment(n: int, n1: int, seed) -> np.ndarray:
    """Draw a uniformly random assignment of n1 treated units among n.

    Uses a partial Fisher-Yates shuffle: for slot k = 0..n1-1 one integer
    is drawn uniformly from [k, n) and swapped into place, so draws are
    reproducible across platforms for a given seeded generator.

    Parameters
    ----------
    n, n1 : int
        Population size and treated count, 1 <= n1 <= n-1.
    seed : int or numpy.random.Generator

    Returns
    -------
    ndarray of shape (n,)
        0/1 vector with exactly n1 ones.
    """
    if not 1 <= n1 <= n - 1:
        raise InvalidDesign(f"need 1 <= n1 <= n-1, got n={n}, n1={n1}")
    rng = as_generator(seed)
    idx = np.arange(n)
    for k in range(n1):
        j = int(rng.integers(k, n))
        idx[k], idx[j] = idx[j], idx[k]
    t = np.zeros(n, dtype=np.int64)
    t[idx[:n1]] = 1
    return t


def enumerate_assignments(
    n: int, n1: int, cap: int = ENUMERATION_CAP
) -> Iterator[np.ndarray]:
    """Yield every size-n1 assignment exactly once.

    Order is lexicographic in the tuple of treated indices. This is the
    exactness oracle behind the unbiasedness and moment checks, so it is
    deliberately dumb and index-based.

    Raises
    ------
    TooLarge
        If C(n, n1) exceeds ``cap``.
    """
    if not 1 <= n1 <= n - 1:
        raise InvalidDesign(f"need 1 <= n1 <= n-1, got n={n}, n1={n1}")
    total = math.comb(n, n1)
    if total > cap:
        raise TooLarge(f"C({n},{n1}) = {total} exceeds cap {cap}")
    import itertools

    for treated in itertools.combinations(range(n), n1):
        t = np.zeros(n, dtype=np.int64)
        t[list(treated)] = 1
        yield t


def population_residuals(pop: FinitePopulation) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of each potential-outcome vector on the full-population design.

    Both vectors are orthogonal to every design column (including the
    intercept, so each sums to zero).
    """
    Z = pop.design
    fit1 = ols_fit(Z, pop.y1)
    fit0 = ols_fit(Z, pop.y0)
    return fit1.residuals, fit0.residuals


def diagnostics(pop: FinitePopulation) -> PopulationDiagnostics:
    """Leverage and residual diagnostics of the full population."""
    e1, e0 = population_residuals(pop)
    gram = GramFactor(pop.design)
    lev = gram.leverages()
    msq = max(float(np.mean(e1**2)), float(np.mean(e0**2)))
    absmax = max(float(np.max(np.abs(e1))), float(np.max(np.abs(e0))), 0.0)
    denom = math.sqrt(float(np.sum(e1**2)) * float(np.sum(e0**2)))
    corr = float(np.sum(e1 * e0) / denom) if denom > 0 else 0.0
    corr = min(1.0, max(-1.0, corr))
    return PopulationDiagnostics(
        max_leverage=float(lev.max()),
        max_residual_msq=msq,
        max_residual_abs=absmax,
        residual_correlation=corr,
        leverages=lev,
    )
