"""Dense least-squares machinery.

Everything downstream (regression-adjusted estimators, leverage-based
variance corrections, leave-one-out cross-fitting) reduces to a handful of
primitives built here: an OLS fit with its hat-matrix diagonal, on-demand
hat-matrix entries computed from the p x p Gram factor, and the algebraic
leave-one-out identity that avoids refitting n times.

Design matrices are plain ``(n, p)`` float arrays whose first column is
identically one (the intercept). The full n x n hat matrix is never
materialized here; pairwise sums of squared entries are reduced to p x p
traces instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import LeverageOne, SingularGram

# Pivot below this fraction of the largest Gram diagonal counts as singular.
GRAM_PIVOT_RTOL = 1e-10
# 1 - leverage at or below this is treated as an exact-fit unit.
LEVERAGE_TOL = 1e-10


def design_matrix(X) -> np.ndarray:
    """Prepend an all-ones intercept column to a covariate matrix.

    Parameters
    ----------
    X : array_like of shape (n, k)
        Covariate columns; ``k`` may be zero.

    Returns
    -------
    ndarray of shape (n, k + 1)
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.ndim != 2:
        raise ValueError("covariate matrix must be two-dimensional")
    n = X.shape[0]
    return np.hstack([np.ones((n, 1)), X])


def _validate_design(Z: np.ndarray) -> np.ndarray:
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2:
        raise ValueError("design matrix must be two-dimensional")
    if not np.all(np.isfinite(Z)):
        raise ValueError("design matrix contains non-finite values")
    if not np.all(Z[:, 0] == 1.0):
        raise ValueError("first design column must be identically one")
    return Z


class GramFactor:
    """Cholesky factorization of Z'Z, kept together with Z.

    Solves against the Gram matrix and produces hat-matrix entries
    P_ij = z_i' (Z'Z)^{-1} z_j on demand without ever forming the n x n
    projection matrix.
    """

    def __init__(self, Z: np.ndarray):
        Z = _validate_design(Z)
        n, p = Z.shape
        if n < p:
            raise SingularGram(f"need at least as many rows as columns (n={n}, p={p})")
        gram = Z.T @ Z
        try:
            self._cho = cho_factor(gram, lower=True)
        except LinAlgError as err:
            raise SingularGram("Z'Z is not positive definite") from err
        # Sequential elimination pivots are the squared Cholesky diagonal.
        pivots = np.diag(self._cho[0]) ** 2
        if pivots.min() < GRAM_PIVOT_RTOL * np.diag(gram).max():
            raise SingularGram(
                "Z'Z pivot below tolerance (collinear covariates or too few rows)"
            )
        self.Z = Z
        self._leverages: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    @property
    def p(self) -> int:
        return self.Z.shape[1]

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Solve (Z'Z) x = b for a vector or matrix right-hand side."""
        return cho_solve(self._cho, b)

    def leverages(self) -> np.ndarray:
        """Diagonal of the hat matrix, cached after first use."""
        if self._leverages is None:
            V = self.solve(self.Z.T)
            lev = np.einsum("ij,ji->i", self.Z, V)
            lev.flags.writeable = False
            self._leverages = lev
        return self._leverages

    def hat_entry(self, i: int, j: int) -> float:
        """Single hat-matrix entry P_ij = z_i' (Z'Z)^{-1} z_j."""
        return float(self.Z[i] @ self.solve(self.Z[j]))

    def hat_rows(self, indices) -> np.ndarray:
        """Hat-matrix rows P[indices, :], shape (len(indices), n)."""
        V = self.solve(self.Z[indices].T)
        return (self.Z @ V).T

    def offdiag_hat_sq_sum(self, a: np.ndarray, b: np.ndarray) -> float:
        """Compute sum over i != j of P_ij^2 a_i b_j.

        Uses the identity sum_ij P_ij^2 a_i b_j = tr(C M_b C M_a) with
        C = (Z'Z)^{-1} and M_v = Z' diag(v) Z, so the cost is O(n p^2)
        and O(p^2) memory instead of O(n^2).
        """
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        Ma = self.Z.T @ (self.Z * a[:, None])
        Mb = self.Z.T @ (self.Z * b[:, None])
        full = float(np.sum(self.solve(Mb) * self.solve(Ma).T))
        lev = self.leverages()
        return full - float(np.sum(lev**2 * a * b))


@dataclass(frozen=True)
class OlsFit:
    """Result of an OLS fit: coefficients, residuals, leverages, Gram factor."""

    coefficients: np.ndarray
    residuals: np.ndarray
    leverages: np.ndarray
    gram: GramFactor

    @property
    def n(self) -> int:
        return self.gram.n

    @property
    def p(self) -> int:
        return self.gram.p


@dataclass(frozen=True)
class HatDiagnostics:
    """Leverage summary of a design: the full diagonal and its maximum."""

    max_leverage: float
    leverages: np.ndarray


def ols_fit(Z, y) -> OlsFit:
    """Least-squares fit of ``y`` on the design ``Z``.

    Parameters
    ----------
    Z : ndarray of shape (n, p)
        Design matrix with an intercept as its first column.
    y : ndarray of shape (n,)

    Returns
    -------
    OlsFit

    Raises
    ------
    SingularGram
        If ``Z'Z`` is numerically rank deficient (including n < p).
    """
    y = np.asarray(y, dtype=float)
    gram = GramFactor(Z)
    if y.shape != (gram.n,):
        raise ValueError(f"y must have shape ({gram.n},), got {y.shape}")
    coef = gram.solve(gram.Z.T @ y)
    resid = y - gram.Z @ coef
    for arr in (coef, resid):
        arr.flags.writeable = False
    return OlsFit(coef, resid, gram.leverages(), gram)


def hat_entry(fit: OlsFit | GramFactor, i: int, j: int) -> float:
    """Hat-matrix entry P_ij for a fit or a bare Gram factor."""
    gram = fit.gram if isinstance(fit, OlsFit) else fit
    return gram.hat_entry(i, j)


def hat_diagnostics(fit: OlsFit | GramFactor) -> HatDiagnostics:
    """Leverage vector and its maximum."""
    gram = fit.gram if isinstance(fit, OlsFit) else fit
    lev = gram.leverages()
    return HatDiagnostics(float(lev.max()), lev)


def loo_residual(fit: OlsFit, i: int) -> float:
    """Leave-one-out (prediction-error) residual e_i / (1 - P_ii)."""
    d = 1.0 - fit.leverages[i]
    if d <= LEVERAGE_TOL:
        raise LeverageOne(f"unit {i} has leverage one; leave-one-out undefined")
    return float(fit.residuals[i] / d)


def loo_residuals(fit: OlsFit) -> np.ndarray:
    """All leave-one-out residuals at once; raises if any leverage is one."""
    d = 1.0 - fit.leverages
    if d.min() <= LEVERAGE_TOL:
        bad = int(np.argmin(d))
        raise LeverageOne(f"unit {bad} has leverage one; leave-one-out undefined")
    return fit.residuals / d


def loo_coefficients(fit: OlsFit, i: int) -> np.ndarray:
    """Coefficients after deleting row ``i``, via the rank-one identity.

    Equals refitting with row ``i`` removed, but costs a single
    Gram-factor solve.
    """
    step = fit.gram.solve(fit.gram.Z[i]) * loo_residual(fit, i)
    return fit.coefficients - step
