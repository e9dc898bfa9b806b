"""Least-squares core: fits, hat entries, leave-one-out identities."""

import numpy as np
import pytest

from designbench import (
    GramFactor,
    LeverageOne,
    SingularGram,
    design_matrix,
    hat_diagnostics,
    hat_entry,
    loo_coefficients,
    loo_residual,
    loo_residuals,
    ols_fit,
)

from oracles import (
    explicit_hat_matrix,
    ols_via_normal_equations,
    refit_without_row,
)


class TestOlsFit:
    def test_intercept_only_mean_regression(self):
        Z = design_matrix(np.empty((4, 0)))
        fit = ols_fit(Z, np.array([1.0, 2.0, 3.0, 4.0]))
        assert fit.coefficients == pytest.approx([2.5])
        np.testing.assert_allclose(fit.residuals, [-1.5, -0.5, 0.5, 1.5])
        np.testing.assert_allclose(fit.leverages, 0.25)

    def test_exact_fit_recovers_coefficients(self, rng):
        Z = design_matrix(rng.normal(size=(12, 3)))
        beta = np.array([1.0, -2.0, 0.5, 3.0])
        fit = ols_fit(Z, Z @ beta)
        np.testing.assert_allclose(fit.coefficients, beta, atol=1e-10)
        np.testing.assert_allclose(fit.residuals, 0.0, atol=1e-10)

    def test_matches_independent_solver(self, rng):
        Z = design_matrix(rng.normal(size=(20, 3)))
        y = rng.normal(size=20)
        fit = ols_fit(Z, y)
        np.testing.assert_allclose(
            fit.coefficients, ols_via_normal_equations(Z, y), atol=1e-9
        )

    def test_residual_orthogonality(self, rng):
        for _ in range(10):
            n = int(rng.integers(8, 60))
            k = int(rng.integers(0, 5))
            Z = design_matrix(rng.normal(size=(n, k)))
            y = rng.normal(size=n) * 10
            fit = ols_fit(Z, y)
            scale = np.abs(y).max() * np.abs(Z).sum(axis=0).max()
            assert np.abs(Z.T @ fit.residuals).max() <= 1e-8 * scale

    def test_rejects_wide_design(self, rng):
        Z = design_matrix(rng.normal(size=(3, 5)))
        with pytest.raises(SingularGram):
            ols_fit(Z, rng.normal(size=3))

    def test_rejects_collinear_columns(self, rng):
        X = rng.normal(size=(15, 2))
        X = np.hstack([X, (2 * X[:, :1] - X[:, 1:])])
        with pytest.raises(SingularGram):
            ols_fit(design_matrix(X), rng.normal(size=15))

    def test_rejects_missing_intercept(self, rng):
        with pytest.raises(ValueError):
            ols_fit(rng.normal(size=(10, 2)), rng.normal(size=10))

    def test_shift_invariance_of_fit(self, rng):
        X = rng.normal(size=(25, 3))
        y = rng.normal(size=25)
        base = ols_fit(design_matrix(X), y)
        shifted = X.copy()
        shifted[:, 1] += 7.5
        other = ols_fit(design_matrix(shifted), y)
        np.testing.assert_allclose(other.residuals, base.residuals, atol=1e-8)
        np.testing.assert_allclose(other.leverages, base.leverages, atol=1e-8)
        np.testing.assert_allclose(
            other.coefficients[1:], base.coefficients[1:], atol=1e-8
        )


class TestHatMatrix:
    def test_intercept_only_entries(self):
        fit = ols_fit(design_matrix(np.empty((5, 0))), np.arange(5.0))
        for i in range(5):
            for j in range(5):
                assert hat_entry(fit, i, j) == pytest.approx(1 / 5)

    def test_row_sums_one(self, rng):
        Z = design_matrix(rng.normal(size=(15, 2)))
        gram = GramFactor(Z)
        P = gram.hat_rows(np.arange(15))
        np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-9)

    def test_squared_row_sums_equal_diagonal(self, rng):
        Z = design_matrix(rng.normal(size=(15, 2)))
        gram = GramFactor(Z)
        P_oracle = explicit_hat_matrix(Z)
        for i in range(15):
            assert np.sum(P_oracle[i] ** 2) == pytest.approx(
                gram.hat_entry(i, i), abs=1e-9
            )

    def test_identities_on_larger_designs(self, rng):
        for n, k in ((60, 8), (200, 29)):
            gram = GramFactor(design_matrix(rng.normal(size=(n, k))))
            lev = gram.leverages()
            P = gram.hat_rows(np.arange(n))
            assert abs(lev.sum() - (k + 1)) <= 1e-8
            assert np.abs(P.sum(axis=1) - 1.0).max() <= 1e-8
            assert np.abs((P**2).sum(axis=1) - lev).max() <= 1e-8
            assert lev.min() >= 0.0 and lev.max() <= 1.0

    def test_diagnostics_bounds(self, rng):
        gram = GramFactor(design_matrix(rng.normal(size=(30, 4))))
        diag = hat_diagnostics(gram)
        assert diag.max_leverage == pytest.approx(gram.leverages().max())
        assert 5 / 30 <= diag.max_leverage <= 1.0

    def test_offdiag_sq_sum_matches_explicit(self, rng):
        Z = design_matrix(rng.normal(size=(40, 4)))
        gram = GramFactor(Z)
        P = explicit_hat_matrix(Z)
        a = rng.normal(size=40)
        b = rng.normal(size=40)
        direct = sum(
            P[i, j] ** 2 * a[i] * b[j]
            for i in range(40)
            for j in range(40)
            if i != j
        )
        assert gram.offdiag_hat_sq_sum(a, b) == pytest.approx(direct, abs=1e-9)


class TestLeaveOneOut:
    def test_zero_residual_is_noop(self, rng):
        Z = design_matrix(rng.normal(size=(10, 2)))
        beta = rng.normal(size=3)
        fit = ols_fit(Z, Z @ beta)
        np.testing.assert_allclose(loo_coefficients(fit, 3), fit.coefficients)

    def test_intercept_only_loo_mean(self):
        fit = ols_fit(design_matrix(np.empty((4, 0))), np.array([1.0, 2.0, 3.0, 4.0]))
        assert loo_coefficients(fit, 0) == pytest.approx([3.0])

    def test_loo_residual_arithmetic(self):
        fit = ols_fit(design_matrix(np.empty((4, 0))), np.array([1.0, 2.0, 3.0, 4.0]))
        assert loo_residual(fit, 0) == pytest.approx(-2.0)
        np.testing.assert_allclose(
            loo_residuals(fit), fit.residuals / 0.75, atol=1e-12
        )

    def test_identity_matches_refits(self, rng):
        Z = design_matrix(rng.normal(size=(25, 4)))
        y = rng.normal(size=25)
        fit = ols_fit(Z, y)
        for i in range(25):
            np.testing.assert_allclose(
                loo_coefficients(fit, i), refit_without_row(Z, y, i), atol=1e-9
            )

    def test_loo_residual_is_prediction_error(self, rng):
        Z = design_matrix(rng.normal(size=(18, 3)))
        y = rng.normal(size=18)
        fit = ols_fit(Z, y)
        for i in range(18):
            pred = Z[i] @ refit_without_row(Z, y, i)
            assert loo_residual(fit, i) == pytest.approx(y[i] - pred, abs=1e-9)

    def test_leverage_one_raises(self):
        # Two rows, two columns: every unit is a perfect-fit pivot.
        Z = design_matrix(np.array([[0.0], [1.0]]))
        fit = ols_fit(Z, np.array([3.0, 4.0]))
        with pytest.raises(LeverageOne):
            loo_residual(fit, 0)
