"""Rendering behavior, filters, errors, and determinism."""

import pytest
from PIL import Image

from plot_figures import EmptySelection, FigureSpec, KINDS, SchemaError, render
from plot_figures.cli import main, parse_filters


class TestRender:
    @pytest.mark.parametrize("kind", KINDS)
    def test_each_kind_renders(self, result_csv, tmp_path, kind):
        out = tmp_path / f"{kind}.png"
        render(FigureSpec(inputs=(str(result_csv),), kind=kind, output=str(out)))
        assert out.exists()
        assert out.stat().st_size > 0

    def test_coverage_embeds_reference_metadata(self, result_csv, tmp_path):
        out = tmp_path / "coverage.png"
        render(FigureSpec(inputs=(str(result_csv),), kind="coverage", output=str(out)))
        with Image.open(out) as image:
            assert image.text.get("Reference-Line") == "0.95"
            assert image.text.get("Title") == "coverage"

    def test_bias_plot_has_no_reference_metadata(self, result_csv, tmp_path):
        out = tmp_path / "rb.png"
        render(
            FigureSpec(inputs=(str(result_csv),), kind="relative_bias", output=str(out))
        )
        with Image.open(out) as image:
            assert "Reference-Line" not in image.text

    def test_filters_restrict_series(self, result_csv, tmp_path):
        full = tmp_path / "all.png"
        thin = tmp_path / "cf_only.png"
        render(FigureSpec(inputs=(str(result_csv),), kind="coverage", output=str(full)))
        render(
            FigureSpec(
                inputs=(str(result_csv),),
                kind="coverage",
                output=str(thin),
                estimators=("cf",),
                se_methods=("dbhc3",),
            )
        )
        # Fewer series means fewer drawn artifacts, so a smaller file.
        assert thin.stat().st_size < full.stat().st_size

    def test_empty_selection_raises(self, result_csv, tmp_path):
        with pytest.raises(EmptySelection):
            render(
                FigureSpec(
                    inputs=(str(result_csv),),
                    kind="relative_bias",
                    output=str(tmp_path / "x.png"),
                    estimators=("nonexistent",),
                )
            )

    def test_schema_error_on_malformed_csv(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        with pytest.raises(SchemaError):
            render(
                FigureSpec(
                    inputs=(str(bad),), kind="coverage", output=str(tmp_path / "x.png")
                )
            )

    def test_identical_inputs_identical_images(self, result_csv, tmp_path):
        outs = []
        for name in ("a.png", "b.png"):
            out = tmp_path / name
            render(
                FigureSpec(inputs=(str(result_csv),), kind="coverage", output=str(out))
            )
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_unknown_kind_rejected(self, result_csv, tmp_path):
        with pytest.raises(ValueError):
            FigureSpec(
                inputs=(str(result_csv),), kind="pie", output=str(tmp_path / "x.png")
            )


class TestCli:
    def test_happy_path(self, result_csv, tmp_path, capsys):
        out = tmp_path / "fig.png"
        code = main(
            ["coverage_zoom", "--input", str(result_csv), "--out", str(out)]
        )
        assert code == 0
        assert out.exists()
        assert "wrote" in capsys.readouterr().out

    def test_filter_flags(self, result_csv, tmp_path):
        out = tmp_path / "fig.png"
        code = main(
            [
                "coverage",
                "--input", str(result_csv),
                "--out", str(out),
                "--filter", "estimator=cf",
                "--filter", "se_method=hc3",
            ]
        )
        assert code == 0

    def test_bad_filter_is_usage_error(self, result_csv, tmp_path):
        code = main(
            [
                "coverage",
                "--input", str(result_csv),
                "--out", str(tmp_path / "f.png"),
                "--filter", "bogus=1",
            ]
        )
        assert code == 2

    def test_empty_selection_exit_code(self, result_csv, tmp_path, capsys):
        code = main(
            [
                "sd_ratio",
                "--input", str(result_csv),
                "--out", str(tmp_path / "f.png"),
                "--filter", "estimator=none_such",
            ]
        )
        assert code == 3

    def test_parse_filters(self):
        got = parse_filters(["estimator=cf,adj", "se_method=hc3"])
        assert got == {"estimator": ("cf", "adj"), "se_method": ("hc3",)}
