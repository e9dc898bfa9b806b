"""Regenerate the synthetic college-achievement fixture (star_like.csv).

Mimics the schema of a first-year-GPA incentives experiment: a GPA-like
outcome, a binary treatment offer, a block of demographic/ability
covariates, and interactions of age, gender, and high-school GPA with the
remaining baseline variables. Deterministic; run from this directory:

    python make_star_like.py
"""

from pathlib import Path

import numpy as np
import pandas as pd

HERE = Path(__file__).parent


def build(n=600, n1=150, seed=20240901) -> pd.DataFrame:
    rng = np.random.default_rng(seed)
    female = rng.integers(0, 2, n)
    age = rng.integers(17, 22, n).astype(float)
    hsgpa = np.clip(rng.normal(78, 8, n), 55, 99)
    english_first = rng.integers(0, 2, n)
    live_at_home = rng.integers(0, 2, n)
    procrastinator = rng.integers(1, 5, n).astype(float)
    educ_goal = rng.integers(1, 4, n).astype(float)
    mom_educ = rng.integers(1, 6, n).astype(float)
    dad_educ = rng.integers(1, 6, n).astype(float)
    grad4_intent = rng.integers(0, 2, n)
    first_choice = rng.integers(0, 2, n)

    base = {
        "female": female,
        "age": age,
        "hsgpa": hsgpa,
        "english_first": english_first,
        "live_at_home": live_at_home,
        "procrastinator": procrastinator,
        "educ_goal": educ_goal,
        "mom_educ": mom_educ,
        "dad_educ": dad_educ,
        "grad4_intent": grad4_intent,
        "first_choice": first_choice,
    }
    frame = pd.DataFrame(base)
    others = [c for c in frame.columns if c not in ("female", "age", "hsgpa")]
    for lead in ("age", "female", "hsgpa"):
        for col in others:
            frame[f"{lead}_x_{col}"] = frame[lead] * frame[col]

    treated = np.zeros(n, dtype=int)
    treated[rng.choice(n, n1, replace=False)] = 1
    gpa = (
        1.2
        + 0.02 * (hsgpa - 78)
        + 0.15 * female
        + 0.05 * educ_goal
        - 0.04 * procrastinator
        + 0.15 * treated
        + rng.normal(0, 0.55, n)
    )
    frame.insert(0, "treated", treated)
    frame.insert(0, "gpa", np.round(gpa, 4))
    return frame


if __name__ == "__main__":
    df = build()
    out = HERE / "star_like.csv"
    df.to_csv(out, index=False, lineterminator="\n")
    print(f"wrote {out} ({len(df)} rows, {len(df.columns)} columns)")
