"""Render benchmark figure families from simulation result CSVs.

Consumes only the documented result schema (one row per
(p, estimator, se_method)) and never any internal state of the
simulation engine, so any conforming CSV plots the same way.

Figure kinds:

``relative_bias``
    One line per estimator: average bias over the theoretical linear
    standard deviation, against the covariate count p.
``sd_ratio``
    One line per estimator: standard deviation relative to the
    cross-fitted estimator.
``coverage``
    One line per (estimator, se_method) pair, with the nominal 0.95
    reference line.
``coverage_zoom``
    The cross-fitted estimator only, hc3 versus dbhc3, zoomed around the
    nominal level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

REQUIRED_COLUMNS = (
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

KINDS = ("relative_bias", "sd_ratio", "coverage", "coverage_zoom")

NOMINAL_LEVEL = 0.95


class SchemaError(Exception):
    """Input CSV does not conform to the documented result schema."""


class EmptySelection(Exception):
    """No rows left to plot after applying the filters."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: inputs, figure kind, output path, and row filters."""

    inputs: tuple[str, ...]
    kind: str
    output: str
    estimators: tuple[str, ...] = field(default=())
    se_methods: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def load_results(paths) -> pd.DataFrame:
    """Read and concatenate result CSVs, validating the schema."""
    frames = []
    for path in paths:
        try:
            frame = pd.read_csv(path)
        except FileNotFoundError:
            raise
        except Exception as err:
            raise SchemaError(f"cannot parse {path}: {err}") from err
        missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
        if missing:
            raise SchemaError(
                f"{path} is missing required columns: {', '.join(missing)}"
            )
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def _apply_filters(frame: pd.DataFrame, spec: FigureSpec) -> pd.DataFrame:
    if spec.estimators:
        frame = frame[frame["estimator"].isin(spec.estimators)]
    if spec.se_methods:
        frame = frame[frame["se_method"].isin(spec.se_methods)]
    return frame


def _series_label(keys: dict) -> str:
    parts = [str(v) for v in keys.values() if v not in (None, "")]
    return " / ".join(parts)


def render(spec: FigureSpec) -> Path:
    """Draw the requested figure and write it to ``spec.output``.

    Returns the output path. Identical inputs produce identical image
    files (no timestamps are embedded).
    """
    frame = _apply_filters(load_results(spec.inputs), spec)

    if spec.kind == "coverage_zoom":
        frame = frame[
            (frame["estimator"] == "cf")
            & (frame["se_method"].isin(("hc3", "dbhc3")))
        ]

    metric = {
        "relative_bias": "relative_bias",
        "sd_ratio": "sd_ratio_vs_cf",
        "coverage": "coverage",
        "coverage_zoom": "coverage",
    }[spec.kind]
    per_pair = spec.kind in ("coverage", "coverage_zoom")

    frame = frame.dropna(subset=[metric])
    if frame.empty:
        raise EmptySelection(
            f"no rows with a defined {metric!r} after filtering"
        )

    many_designs = frame["design"].nunique() > 1
    group_cols = ["estimator"] + (["se_method"] if per_pair else [])
    if many_designs:
        group_cols = ["design"] + group_cols

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for keys, sub in frame.groupby(group_cols, sort=True):
        if not isinstance(keys, tuple):
            keys = (keys,)
        label = _series_label(dict(zip(group_cols, keys)))
        if not per_pair:
            # Estimator-level metrics repeat across se_method rows.
            sub = sub.drop_duplicates(subset=["design", "p"])
        sub = sub.sort_values("p")
        ax.plot(sub["p"], sub[metric], marker="o", label=label)

    has_reference = spec.kind in ("coverage", "coverage_zoom")
    if has_reference:
        ax.axhline(NOMINAL_LEVEL, linestyle="--", linewidth=1.0, color="black")
        ax.set_ylabel("coverage")
        if spec.kind == "coverage_zoom":
            ax.set_ylim(NOMINAL_LEVEL - 0.05, NOMINAL_LEVEL + 0.03)
    elif spec.kind == "relative_bias":
        ax.axhline(0.0, linewidth=0.8, color="gray")
        ax.set_ylabel("bias / sd of linear component")
    else:
        ax.axhline(1.0, linewidth=0.8, color="gray")
        ax.set_ylabel("sd relative to cross-fitted")
    ax.set_xlabel("number of covariates")
    ax.set_title(spec.kind.replace("_", " "))
    ax.legend(fontsize=8)
    fig.tight_layout()

    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = {
        "Title": f"{spec.kind}",
        "Source": ";".join(str(p) for p in spec.inputs),
    }
    if has_reference:
        metadata["Reference-Line"] = f"{NOMINAL_LEVEL}"
    save_kwargs = {}
    if out.suffix.lower() == ".png":
        save_kwargs["metadata"] = metadata
    elif out.suffix.lower() == ".svg":
        save_kwargs["metadata"] = {"Date": None}  # keep output reproducible
    fig.savefig(out, dpi=150, **save_kwargs)
    plt.close(fig)
    return out
