import csv

import pytest

from plot_figures import REQUIRED_COLUMNS

# A small but complete result table: two designs are not needed; one
# design, three covariate counts, three estimators, two se methods.
ROWS = []
for p, rb in ((10, -0.02), (20, -0.05), (30, -0.09)):
    for est, bias_scale, sd_ratio in (("adj", 1.0, 1.05), ("cf", 0.05, 1.0), ("unbiased", 0.1, 2.4)):
        for se, cov in (("hc3", 0.94), ("dbhc3", 0.952)):
            ROWS.append(
                {
                    "design": "t3_worst",
                    "df": 3,
                    "error_kind": "worst",
                    "p": p,
                    "estimator": est,
                    "se_method": se,
                    "bias": rb * bias_scale * 2.5,
                    "relative_bias": rb * bias_scale,
                    "sd": 0.11 * sd_ratio,
                    "sd_ratio_vs_cf": sd_ratio,
                    "coverage": cov - abs(rb) * bias_scale / 2,
                    "mean_se": 0.12,
                    "failures": 0,
                    "reps": 500,
                }
            )


@pytest.fixture
def result_csv(tmp_path):
    path = tmp_path / "simresult_t3_worst.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=REQUIRED_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(ROWS)
    return path
