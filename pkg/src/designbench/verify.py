"""Built-in exactness oracles, runnable from the command line.

Each suite checks a machine-verifiable identity that the rest of the
toolkit leans on: closed-form assignment moments against exhaustive
enumeration, exact unbiasedness of the corrected estimator against the
full assignment sweep, the leave-one-out coefficient identity against
deletion refits, and the projection-matrix identities. All comparisons
are either exact (rational arithmetic) or at fixed documented tolerances.
"""

from __future__ import annotations

import numpy as np

from .estimators import diff_in_means, unbiased
from .linalg import GramFactor, design_matrix, loo_coefficients, ols_fit
from .moments import SUPPORTED_PATTERNS, closed_form_moment, enumerated_moment
from .population import FinitePopulation, enumerate_assignments

SUITES = ("moments", "unbiasedness", "loo", "projections", "all")

MOMENT_DESIGNS = ((4, 2), (5, 2), (6, 3), (7, 3))


def _check(name: str, ok: bool, detail: str = "") -> dict:
    return {"name": name, "ok": bool(ok), "detail": detail}


def run_moments() -> list[dict]:
    """Closed-form moments equal exhaustive enumeration, exactly."""
    out = []
    for n, n1 in MOMENT_DESIGNS:
        worst = None
        for pat in SUPPORTED_PATTERNS:
            if len(pat) > n:
                continue
            closed = closed_form_moment(pat, n, n1)
            enum = enumerated_moment(pat, n, n1)
            if closed != enum:
                worst = (pat, closed, enum)
                break
        ok = worst is None
        detail = (
            f"all patterns exact at (n={n}, n1={n1})"
            if ok
            else f"pattern {worst[0]}: closed {worst[1]} != enumerated {worst[2]}"
        )
        out.append(_check(f"moments (n={n}, n1={n1})", ok, detail))
    return out


def _fixture_population(n: int, n1: int, k: int, seed: int) -> FinitePopulation:
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, k))
    y1 = rng.normal(size=n) + X @ rng.normal(size=k)
    y0 = rng.normal(size=n) + X @ rng.normal(size=k)
    return FinitePopulation(y1=y1, y0=y0, X=X, n1=n1)


def run_unbiasedness(tol: float = 1e-10) -> list[dict]:
    """Enumeration means of the unbiased and difference estimators hit tau."""
    out = []
    fixtures = ((6, 3, 1, 20240612), (8, 4, 2, 20240613))
    for n, n1, k, seed in fixtures:
        pop = _fixture_population(n, n1, k, seed)
        sums = {"unbiased": 0.0, "dif": 0.0}
        count = 0
        for t in enumerate_assignments(n, n1):
            sample = pop.observe(t)
            sums["unbiased"] += unbiased(sample).tau_hat
            sums["dif"] += diff_in_means(sample).tau_hat
            count += 1
        errs = {k2: abs(v / count - pop.tau) for k2, v in sums.items()}
        ok = max(errs.values()) <= tol
        detail = ", ".join(f"{k2}: |err| = {v:.2e}" for k2, v in errs.items())
        out.append(_check(f"unbiasedness (n={n}, n1={n1}, k={k})", ok, detail))
    return out


def run_loo(instances: int = 20, tol: float = 1e-9, seed: int = 7) -> list[dict]:
    """Leave-one-out identity equals deletion refits on random designs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(10, 41))
        k = int(rng.integers(1, 6))
        Z = design_matrix(rng.normal(size=(n, k)))
        y = rng.normal(size=n)
        fit = ols_fit(Z, y)
        for i in range(n):
            direct = np.linalg.lstsq(
                np.delete(Z, i, axis=0), np.delete(y, i), rcond=None
            )[0]
            worst = max(worst, float(np.abs(loo_coefficients(fit, i) - direct).max()))
    return [
        _check(
            "leave-one-out identity",
            worst <= tol,
            f"max |identity - refit| = {worst:.2e} over {instances} designs",
        )
    ]


def run_projections(instances: int = 20, tol: float = 1e-8, seed: int = 11) -> list[dict]:
    """Hat-matrix identities: trace p, unit row sums, squared row sums."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(10, 60))
        k = int(rng.integers(1, 7))
        gram = GramFactor(design_matrix(rng.normal(size=(n, k))))
        lev = gram.leverages()
        P = gram.hat_rows(np.arange(n))
        worst = max(
            worst,
            abs(float(lev.sum()) - gram.p),
            float(np.abs(P.sum(axis=1) - 1.0).max()),
            float(np.abs((P**2).sum(axis=1) - lev).max()),
        )
    return [
        _check(
            "projection identities",
            worst <= tol,
            f"max identity violation = {worst:.2e} over {instances} designs",
        )
    ]


def run_suite(suite: str) -> list[dict]:
    """Run one named suite (or every suite for ``all``)."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    runners = {
        "moments": run_moments,
        "unbiasedness": run_unbiasedness,
        "loo": run_loo,
        "projections": run_projections,
    }
    if suite == "all":
        out = []
        for name in ("moments", "unbiasedness", "loo", "projections"):
            out.extend(runners[name]())
        return out
    return runners[suite]()
