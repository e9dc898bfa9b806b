"""Command-line front door: analyze CSV data, run campaigns, verify oracles.

Exit codes: 0 success, 2 usage or configuration error, 3 data error,
4 numerical or design error, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from .analysis import EstimateReport, analyze_sample, analyze_stratified
from .errors import (
    ConfigError,
    DegenerateObjective,
    DesignBenchError,
    InvalidDesign,
    LeverageOne,
    MissingValue,
    NonBinaryTreatment,
    ParseError,
    SingularGram,
    TooLarge,
)
from .estimators import ESTIMATORS
from .population import ObservedSample
from .simulation import SimConfig, run_monte_carlo
from .stratified import StratifiedSample
from .variance import SE_METHODS
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4
EXIT_VERIFY = 5

# Campaign-defining keys that a config file must pin down (for provenance).
REQUIRED_CONFIG_KEYS = ("n", "pi1", "p_grid", "df", "error_kind", "reps", "seed")
OPTIONAL_CONFIG_KEYS = ("estimators", "se_methods", "ci_level", "out_dir")

ANALYZE_CSV_COLUMNS = ("quantity", "estimator", "se_method", "value")


def _parse_int_list(text: str) -> tuple[int, ...]:
    body = text.strip().strip("{}")
    try:
        return tuple(int(tok) for tok in body.split(",") if tok.strip())
    except ValueError as err:
        raise ConfigError(f"expected a comma-separated integer list, got {text!r}") from err


def _parse_name_list(text: str) -> tuple[str, ...]:
    return tuple(tok.strip() for tok in text.split(",") if tok.strip())


def read_config(path) -> dict:
    """Parse a flat key=value campaign config (blank and '#' lines skipped)."""
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in REQUIRED_CONFIG_KEYS + OPTIONAL_CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def build_sim_config(values: dict) -> tuple[SimConfig, str]:
    """Turn merged config values into a validated SimConfig plus out dir."""
    for key in REQUIRED_CONFIG_KEYS:
        if key not in values:
            raise ConfigError(f"missing required key {key!r}")
    try:
        cfg = SimConfig(
            n=int(values["n"]),
            pi1=float(values["pi1"]),
            p_grid=_parse_int_list(values["p_grid"]),
            df=int(values["df"]),
            error_kind=str(values["error_kind"]),
            reps=int(values["reps"]),
            master_seed=int(values["seed"]),
            estimators=_parse_name_list(values.get("estimators", ",".join(ESTIMATORS))),
            se_methods=_parse_name_list(values.get("se_methods", ",".join(SE_METHODS))),
            ci_level=float(values.get("ci_level", "0.95")),
        )
    except ValueError as err:
        raise ConfigError(str(err)) from err
    try:
        cfg.validate()
    except InvalidDesign as err:
        raise ConfigError(str(err)) from err
    return cfg, values.get("out_dir", ".")


def _load_table(path) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path)
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    except Exception as err:  # malformed CSV
        raise ParseError(f"cannot parse {path}: {err}") from err
    if frame.empty:
        raise ParseError(f"{path} contains no rows")
    return frame


def load_observed_sample(
    path, outcome: str, treatment: str, covariates: str = "all", stratum: str | None = None
) -> ObservedSample:
    """Read a CSV into an observed sample, validating the selected columns."""
    frame = _load_table(path)
    for col in [outcome, treatment] + ([stratum] if stratum else []):
        if col not in frame.columns:
            raise ParseError(f"column {col!r} not found in {path}")
    if covariates == "all":
        cov_cols = [
            c for c in frame.columns if c not in {outcome, treatment, stratum}
        ]
    else:
        cov_cols = list(_parse_name_list(covariates))
        for col in cov_cols:
            if col not in frame.columns:
                raise ParseError(f"covariate column {col!r} not found in {path}")
    selected = [outcome, treatment] + cov_cols + ([stratum] if stratum else [])
    sub = frame[selected]
    if sub.isna().any().any():
        bad = [c for c in selected if sub[c].isna().any()]
        raise MissingValue(f"missing values in columns: {', '.join(bad)}")
    t_raw = frame[treatment].to_numpy()
    t_num = pd.to_numeric(frame[treatment], errors="coerce").to_numpy()
    if np.isnan(t_num).any() or not np.isin(t_num, (0, 1)).all():
        raise NonBinaryTreatment(
            f"treatment column {treatment!r} must contain only 0 and 1; "
            f"saw values like {sorted(set(map(str, t_raw[:50])))[:5]}"
        )
    try:
        X = frame[cov_cols].to_numpy(dtype=float)
    except (TypeError, ValueError) as err:
        raise ParseError(f"covariates are not numeric: {err}") from err
    try:
        y = frame[outcome].to_numpy(dtype=float)
    except (TypeError, ValueError) as err:
        raise ParseError(f"outcome column is not numeric: {err}") from err
    strata = None
    if stratum:
        codes, _ = pd.factorize(frame[stratum])
        strata = codes
    return ObservedSample(y=y, t=t_num.astype(int), X=X, strata=strata)


def _fmt6(v: float) -> str:
    return f"{v:.6g}"


def report_table(report: EstimateReport) -> str:
    """Human-readable report at six significant digits."""
    lines = []
    kind = "stratified" if report.stratified else "completely randomized"
    lines.append(
        f"sample: n={report.n} (treated {report.n1}, control {report.n0}), "
        f"{report.n_covariates} covariates, {kind}"
    )
    lines.append("")
    lines.append("estimates:")
    for name, pe in report.estimates.items():
        lines.append(f"  {name:>10}  tau_hat = {_fmt6(pe.tau_hat)}")
    for name, msg in report.estimate_errors.items():
        lines.append(f"  {name:>10}  unavailable: {msg}")
    lines.append("")
    lines.append("standard errors:")
    for name, vr in report.ses.items():
        flag = "  [clamped at 0]" if vr.clamped else ""
        lines.append(f"  {name:>10}  se = {_fmt6(vr.se)}{flag}")
    for name, msg in report.se_errors.items():
        lines.append(f"  {name:>10}  unavailable: {msg}")
    if report.estimates and report.ses:
        lines.append("")
        se_names = list(report.ses)
        head = "  ".join(f"{m:>12}" for m in se_names)
        lines.append(f"t-statistics{'':>4}{head}")
        for est_name in report.estimates:
            cells = "  ".join(
                f"{report.t_stats[(est_name, m)]:>12.6g}" for m in se_names
            )
            lines.append(f"  {est_name:>10}  {cells}")
        lines.append("")
        lines.append(f"confidence intervals (level {report.level:g}):")
        for est_name in report.estimates:
            for m in se_names:
                lo, hi = report.cis[(est_name, m)]
                lines.append(
                    f"  {est_name:>10} x {m:<6} [{_fmt6(lo)}, {_fmt6(hi)}]"
                )
    return "\n".join(lines) + "\n"


def report_rows(report: EstimateReport) -> list[tuple]:
    """Long-form rows (quantity, estimator, se_method, value), full precision."""
    rows = []
    for name, pe in report.estimates.items():
        rows.append(("estimate", name, "", pe.tau_hat))
    for name, vr in report.ses.items():
        rows.append(("se", "", name, vr.se))
    for (est_name, m), t in report.t_stats.items():
        rows.append(("t_stat", est_name, m, t))
    for (est_name, m), (lo, hi) in report.cis.items():
        rows.append(("ci_low", est_name, m, lo))
        rows.append(("ci_high", est_name, m, hi))
    return rows


def report_csv(report: EstimateReport) -> str:
    lines = [",".join(ANALYZE_CSV_COLUMNS)]
    for quantity, est_name, m, value in report_rows(report):
        lines.append(f"{quantity},{est_name},{m},{value!r}")
    return "\n".join(lines) + "\n"


def report_json(report: EstimateReport) -> str:
    payload = {
        "n": report.n,
        "n1": report.n1,
        "n0": report.n0,
        "n_covariates": report.n_covariates,
        "level": report.level,
        "stratified": report.stratified,
        "estimates": {k: v.tau_hat for k, v in report.estimates.items()},
        "estimate_errors": report.estimate_errors,
        "standard_errors": {k: v.se for k, v in report.ses.items()},
        "se_errors": report.se_errors,
        "t_stats": {f"{e}:{m}": v for (e, m), v in report.t_stats.items()},
        "confidence_intervals": {
            f"{e}:{m}": list(v) for (e, m), v in report.cis.items()
        },
    }
    return json.dumps(payload, indent=2) + "\n"


def _cmd_analyze(args) -> int:
    sample = load_observed_sample(
        args.input, args.outcome, args.treatment, args.covariates, args.stratum
    )
    estimators = _parse_name_list(args.estimators)
    se_methods = _parse_name_list(args.se)
    if args.stratum:
        strat = StratifiedSample.from_sample(sample)
        report = analyze_stratified(strat, estimators, se_methods, args.level)
    else:
        report = analyze_sample(sample, estimators, se_methods, args.level)
    for name, msg in {**report.estimate_errors, **report.se_errors}.items():
        print(f"warning: {name}: {msg}", file=sys.stderr)
    if not report.estimates:
        print("error: no estimator could be computed", file=sys.stderr)
        return EXIT_NUMERIC
    renderers = {"table": report_table, "csv": report_csv, "json": report_json}
    print(renderers[args.format](report), end="")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    values = read_config(args.config) if args.config else {}
    overrides = {
        "n": args.n,
        "pi1": args.pi1,
        "p_grid": args.p_grid,
        "df": args.df,
        "error_kind": args.error_kind,
        "reps": args.reps,
        "seed": args.seed,
        "estimators": args.estimators,
        "se_methods": args.se,
        "ci_level": args.level,
    }
    for key, val in overrides.items():
        if val is not None:
            values[key] = str(val)
    cfg, out_dir = build_sim_config(values)
    if args.out is not None:
        out_dir = args.out
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("DESIGNBENCH_THREADS", "1"))
    result = run_monte_carlo(cfg, threads=threads)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"simresult_{cfg.design_label}.csv"
    json_path = out / f"simresult_{cfg.design_label}.json"
    result.to_csv(csv_path)
    result.to_json(json_path)
    print(result.summary_table())
    print(f"\nwrote {csv_path} and {json_path}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    checks = run_suite(args.suite)
    failed = 0
    for check in checks:
        status = "ok" if check["ok"] else "FAIL"
        print(f"{status:>4}  {check['name']}: {check['detail']}")
        failed += not check["ok"]
    if failed:
        print(f"{failed} verification check(s) failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="designbench",
        description="Design-based estimation and inference for randomized experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="estimate treatment effects from a CSV file")
    pa.add_argument("--input", required=True, help="CSV file with one row per unit")
    pa.add_argument("--outcome", required=True, help="outcome column name")
    pa.add_argument("--treatment", required=True, help="binary 0/1 treatment column")
    pa.add_argument(
        "--covariates",
        default="all",
        help="comma-separated covariate columns, or 'all' remaining columns",
    )
    pa.add_argument("--stratum", default=None, help="optional stratum label column")
    pa.add_argument("--estimators", default=",".join(ESTIMATORS))
    pa.add_argument("--se", default=",".join(SE_METHODS))
    pa.add_argument("--level", type=float, default=0.95)
    pa.add_argument("--format", choices=("table", "csv", "json"), default="table")
    pa.set_defaults(func=_cmd_analyze)

    ps = sub.add_parser("simulate", help="run a Monte Carlo campaign")
    ps.add_argument("--config", default=None, help="flat key=value config file")
    ps.add_argument("--out", default=None, help="output directory")
    ps.add_argument("--threads", type=int, default=None)
    ps.add_argument("--n", type=int, default=None)
    ps.add_argument("--pi1", type=float, default=None)
    ps.add_argument("--p-grid", dest="p_grid", default=None)
    ps.add_argument("--df", type=int, default=None)
    ps.add_argument("--error-kind", dest="error_kind", default=None)
    ps.add_argument("--reps", type=int, default=None)
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--estimators", default=None)
    ps.add_argument("--se", default=None)
    ps.add_argument("--level", type=float, default=None)
    ps.set_defaults(func=_cmd_simulate)

    pv = sub.add_parser("verify", help="run the built-in exactness oracles")
    pv.add_argument("suite", choices=SUITES)
    pv.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, MissingValue, NonBinaryTreatment) as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except OSError as err:
        print(f"io error: {err}", file=sys.stderr)
        return EXIT_DATA
    except (SingularGram, LeverageOne, InvalidDesign, TooLarge, DegenerateObjective) as err:
        print(f"numerical error: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except DesignBenchError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
