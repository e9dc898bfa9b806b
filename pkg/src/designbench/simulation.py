"""Monte Carlo engine reproducing the benchmark simulation protocol.

The data-generating process keeps one master covariate matrix (i.i.d.
t(df) entries) and one coefficient vector fixed across the whole campaign;
for each covariate count p only the leading p columns and entries are
used, so populations at different p are nested. Outcomes are linear in
the covariates plus one of three error structures: ``worst`` (the unit
sphere direction orthogonal to the design that maximizes the adjusted
estimator's leading bias, doubled under treatment), ``normal``
(homoskedastic standard normal, identical across arms), or ``none``
(a zero-error hook for tests).

Determinism contract: replication r of covariate count p uses a generator
seeded from (master_seed, p, r), per-replication results land in arrays
indexed by r, and every aggregate is reduced with exact summation in
index order. The emitted CSV is therefore byte-identical for any worker
count.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy.stats import norm
from threadpoolctl import threadpool_limits

from .errors import DegenerateObjective, InvalidDesign, LeverageOne, SingularGram
from .estimators import ESTIMATORS, estimate
from .fits import SampleFits
from .linalg import GramFactor, design_matrix
from .population import FinitePopulation, sample_assignment
from .theory import linear_variance
from .variance import SE_METHODS, standard_error

ERROR_KINDS = ("worst", "normal", "none")

CSV_COLUMNS = (
    "design",
    "df",
    "error_kind",
    "p",
    "estimator",
    "se_method",
    "bias",
    "relative_bias",
    "sd",
    "sd_ratio_vs_cf",
    "coverage",
    "mean_se",
    "failures",
    "reps",
)


@dataclass(frozen=True)
class SimConfig:
    """Campaign settings; defaults mirror the benchmark protocol."""

    n: int = 500
    pi1: float = 0.2
    p_grid: tuple[int, ...] = tuple(range(5, 80, 5))
    df: int = 3
    error_kind: str = "worst"
    reps: int = 10_000
    master_seed: int = 0
    estimators: tuple[str, ...] = ESTIMATORS
    se_methods: tuple[str, ...] = SE_METHODS
    ci_level: float = 0.95

    def __post_init__(self):
        object.__setattr__(self, "p_grid", tuple(int(p) for p in self.p_grid))
        object.__setattr__(
            self, "estimators", tuple(str(e) for e in self.estimators)
        )
        object.__setattr__(
            self, "se_methods", tuple(str(m).lower() for m in self.se_methods)
        )

    @property
    def n1(self) -> int:
        return int(round(self.n * self.pi1))

    @property
    def n0(self) -> int:
        return self.n - self.n1

    @property
    def design_label(self) -> str:
        return f"t{self.df}_{self.error_kind}"

    def validate(self) -> "SimConfig":
        if self.n < 4:
            raise InvalidDesign(f"n too small: {self.n}")
        if abs(self.n * self.pi1 - round(self.n * self.pi1)) > 1e-9:
            raise InvalidDesign(f"n * pi1 = {self.n * self.pi1} is not integral")
        if not 1 <= self.n1 <= self.n - 1:
            raise InvalidDesign("treated count must leave both arms non-empty")
        if self.reps < 1:
            raise InvalidDesign(f"reps must be positive, got {self.reps}")
        if self.error_kind not in ERROR_KINDS:
            raise InvalidDesign(f"error_kind must be one of {ERROR_KINDS}")
        if self.df < 1:
            raise InvalidDesign(f"df must be a positive integer, got {self.df}")
        if self.master_seed < 0:
            raise InvalidDesign("master_seed must be non-negative")
        if not self.p_grid:
            raise InvalidDesign("p_grid must be non-empty")
        bound = min(self.n1, self.n0) - 1
        for p in self.p_grid:
            if not 1 <= p < bound:
                raise InvalidDesign(
                    f"covariate count p={p} must satisfy 1 <= p < min(n1, n0) - 1"
                )
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown or not self.estimators:
            raise InvalidDesign(f"unknown estimators: {sorted(unknown)}")
        unknown = set(self.se_methods) - set(SE_METHODS)
        if unknown:
            raise InvalidDesign(f"unknown se methods: {sorted(unknown)}")
        if not 0.0 < self.ci_level < 1.0:
            raise InvalidDesign(f"ci_level must be in (0, 1), got {self.ci_level}")
        return self


@lru_cache(maxsize=8)
def _master_draws(master_seed: int, n: int, df: int):
    """Master covariate matrix, coefficients, and normal errors.

    The covariate matrix is n x n so that the population at any p depends
    only on (master_seed, n, df), never on which other p values a campaign
    happens to include. Stream order from the seeded generator, fixed for
    reproducibility: (1) n x n standard normals, (2) n x n chi-square(df)
    draws (their ratio gives the t(df) covariates), (3) n coefficient
    normals, (4) n error normals.
    """
    rng = np.random.default_rng(np.random.SeedSequence([master_seed]))
    normals = rng.standard_normal((n, n))
    chis = rng.chisquare(df, (n, n))
    X_full = normals / np.sqrt(chis / df)
    coefs = rng.standard_normal(n)
    err_normal = rng.standard_normal(n)
    for arr in (X_full, coefs, err_normal):
        arr.flags.writeable = False
    return X_full, coefs, err_normal


def worst_case_errors(X: np.ndarray) -> np.ndarray:
    """Error direction maximizing the adjusted estimator's leading bias.

    Maximizes the absolute leading bias over unit-mean-square error
    vectors orthogonal to the intercept and every covariate column. The
    constraints force the error into the residual space of the design,
    where the objective is proportional to the inner product with the
    leverage diagonal; the maximizer is the normalized residual
    projection of that diagonal. The sign is canonicalized so the entry
    of largest magnitude is positive.

    Raises
    ------
    DegenerateObjective
        If the leverage diagonal lies in the design column space (for
        instance under constant leverages), making the objective zero.
    """
    Z = design_matrix(X)
    n = Z.shape[0]
    gram = GramFactor(Z)
    d = gram.leverages()
    w = d - Z @ gram.solve(Z.T @ d)
    nrm = float(np.linalg.norm(w))
    if nrm <= 1e-12:
        raise DegenerateObjective(
            "leverage diagonal lies in the design span; objective is zero"
        )
    eps = math.sqrt(n) * w / nrm
    if eps[int(np.argmax(np.abs(eps)))] < 0:
        eps = -eps
    return eps


def build_dgp(cfg: SimConfig, p: int) -> FinitePopulation:
    """Fixed population for covariate count ``p`` under ``cfg``.

    Bit-identical for a given (master_seed, n, df) and nested in p: the
    covariates at p are the leading columns of the covariates at any
    larger p.
    """
    cfg.validate()
    if p not in cfg.p_grid:
        raise InvalidDesign(f"p={p} is not in the configured grid {cfg.p_grid}")
    X_full, coefs, err_normal = _master_draws(cfg.master_seed, cfg.n, cfg.df)
    X = X_full[:, :p]
    mean = X @ coefs[:p]
    if cfg.error_kind == "worst":
        eps = worst_case_errors(X)
        y0 = mean + eps
        y1 = mean + 2.0 * eps
    elif cfg.error_kind == "normal":
        y0 = mean + err_normal
        y1 = y0.copy()
    else:  # "none": zero-error hook
        y0 = mean.copy()
        y1 = mean.copy()
    return FinitePopulation(y1=y1, y0=y0, X=X, n1=cfg.n1)


def _replicate(pop: FinitePopulation, cfg: SimConfig, p: int, r: int):
    """One replication: draw an assignment, compute estimators and SEs."""
    rng = np.random.default_rng(np.random.SeedSequence([cfg.master_seed, p, r]))
    t = sample_assignment(pop.n, pop.n1, rng)
    sample = pop.observe(t)
    fits = SampleFits(sample)
    taus = np.full(len(cfg.estimators), np.nan)
    for k, name in enumerate(cfg.estimators):
        try:
            taus[k] = estimate(sample, name, fits).tau_hat
        except (SingularGram, LeverageOne):
            pass
    ses = np.full(len(cfg.se_methods), np.nan)
    for k, name in enumerate(cfg.se_methods):
        try:
            ses[k] = standard_error(sample, name, fits).se
        except (SingularGram, LeverageOne):
            pass
    return taus, ses


def _chunk_worker(args):
    cfg, p, r0, r1 = args
    pop = build_dgp(cfg, p)
    taus = np.empty((r1 - r0, len(cfg.estimators)))
    ses = np.empty((r1 - r0, len(cfg.se_methods)))
    # The per-replication matrices are small; threaded BLAS only adds
    # wake-up latency here and would oversubscribe the worker pool.
    with threadpool_limits(limits=1):
        for r in range(r0, r1):
            taus[r - r0], ses[r - r0] = _replicate(pop, cfg, p, r)
    return r0, taus, ses


def _fsum_mean(values) -> float:
    vals = [float(v) for v in values]
    return math.fsum(vals) / len(vals)


def _fsum_sd(values) -> float | None:
    vals = [float(v) for v in values]
    if len(vals) < 2:
        return None
    m = math.fsum(vals) / len(vals)
    return math.sqrt(math.fsum((v - m) ** 2 for v in vals) / (len(vals) - 1))


@dataclass(frozen=True)
class SimResult:
    """Campaign summaries, one row per (p, estimator, se_method)."""

    config: SimConfig
    rows: tuple[dict, ...] = field(repr=False)

    def lookup(self, p: int, estimator: str, se_method: str | None = None) -> dict:
        """First row matching the given keys."""
        want = se_method.lower() if se_method is not None else None
        for row in self.rows:
            if row["p"] == p and row["estimator"] == estimator:
                if want is None or row["se_method"] == want:
                    return row
        raise KeyError((p, estimator, se_method))

    def to_csv(self, path) -> None:
        """Locale-independent CSV: '.' decimals, '\\n' endings, full precision."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for row in self.rows:
                writer.writerow([_csv_cell(row[c]) for c in CSV_COLUMNS])

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(
                {"config": asdict(self.config), "rows": list(self.rows)},
                fh,
                indent=2,
                sort_keys=False,
            )
            fh.write("\n")

    def summary_table(self) -> str:
        """Human-readable table at six significant digits."""
        header = " ".join(f"{c:>14}" for c in CSV_COLUMNS)
        lines = [header]
        for row in self.rows:
            cells = []
            for c in CSV_COLUMNS:
                v = row[c]
                if isinstance(v, float):
                    cells.append(f"{v:>14.6g}")
                else:
                    cells.append(f"{'' if v is None else v:>14}")
            lines.append(" ".join(cells))
        return "\n".join(lines)


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def run_monte_carlo(cfg: SimConfig, threads: int = 1) -> SimResult:
    """Run the campaign and aggregate per (p, estimator, se_method).

    Per-replication failures (for example a singular arm Gram matrix at
    large p) are counted in the ``failures`` column and excluded from the
    aggregates rather than aborting the campaign. The result is a pure
    function of ``cfg``; ``threads`` only changes the wall clock.
    """
    cfg.validate()
    if threads < 1:
        raise InvalidDesign(f"threads must be positive, got {threads}")
    z = float(norm.ppf((1.0 + cfg.ci_level) / 2.0))
    n_est = len(cfg.estimators)
    n_se = len(cfg.se_methods)
    rows = []
    for p in cfg.p_grid:
        pop = build_dgp(cfg, p)
        tau = pop.tau
        sigma_l2 = linear_variance(pop)
        # Relative bias is undefined when the linear component is
        # degenerate (e.g. exactly linear outcomes with shared errors).
        outcome_scale = float(np.std(pop.y1) + np.std(pop.y0) + 1.0)
        sigma_l = (
            math.sqrt(sigma_l2)
            if sigma_l2 > (1e-12 * outcome_scale) ** 2
            else None
        )

        taus = np.empty((cfg.reps, n_est))
        ses = np.empty((cfg.reps, n_se))
        if threads == 1:
            _, taus[:], ses[:] = _chunk_worker((cfg, p, 0, cfg.reps))
        else:
            chunk = max(1, -(-cfg.reps // (threads * 4)))
            tasks = [
                (cfg, p, r0, min(r0 + chunk, cfg.reps))
                for r0 in range(0, cfg.reps, chunk)
            ]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                for r0, t_chunk, s_chunk in pool.map(_chunk_worker, tasks):
                    taus[r0 : r0 + len(t_chunk)] = t_chunk
                    ses[r0 : r0 + len(s_chunk)] = s_chunk

        est_stats = {}
        for k, name in enumerate(cfg.estimators):
            col = taus[:, k]
            valid = np.isfinite(col)
            if valid.sum() >= 1:
                bias = _fsum_mean(col[valid]) - tau
                sd = _fsum_sd(col[valid])
            else:
                bias, sd = None, None
            est_stats[name] = {"bias": bias, "sd": sd, "n_fail": int((~valid).sum())}
        sd_cf = est_stats.get("cf", {}).get("sd")

        for k, name in enumerate(cfg.estimators):
            st = est_stats[name]
            rel = (
                st["bias"] / sigma_l
                if (st["bias"] is not None and sigma_l is not None)
                else None
            )
            ratio = (
                st["sd"] / sd_cf
                if (st["sd"] is not None and sd_cf is not None and sd_cf > 0)
                else None
            )
            se_iter = list(enumerate(cfg.se_methods)) or [(None, "none")]
            for m, se_name in se_iter:
                if m is None:
                    coverage, mean_se, failures = None, None, st["n_fail"]
                else:
                    pair = np.isfinite(taus[:, k]) & np.isfinite(ses[:, m])
                    failures = int(cfg.reps - pair.sum())
                    if pair.sum() >= 1:
                        # The epsilon keeps zero-width intervals from
                        # rejecting exact estimates over float jitter.
                        hit = (
                            np.abs(taus[pair, k] - tau)
                            <= z * ses[pair, m] + 1e-12
                        )
                        coverage = _fsum_mean(hit.astype(float))
                        mean_se = _fsum_mean(ses[pair, m])
                    else:
                        coverage, mean_se = None, None
                rows.append(
                    {
                        "design": cfg.design_label,
                        "df": cfg.df,
                        "error_kind": cfg.error_kind,
                        "p": p,
                        "estimator": name,
                        "se_method": se_name,
                        "bias": st["bias"],
                        "relative_bias": rel,
                        "sd": st["sd"],
                        "sd_ratio_vs_cf": ratio,
                        "coverage": coverage,
                        "mean_se": mean_se,
                        "failures": failures,
                        "reps": cfg.reps,
                    }
                )
    return SimResult(config=cfg, rows=tuple(rows))
