import json

import numpy as np
import pytest

from jsparse.bench import CurvePoint, PhaseCurve, TrialRecord, aggregate, write_curves_csv
from jsparse.cli import main
from jsparse.svgplot import render_svg


def flat_curve(rate=1.0, algo="combo", r=2):
    pts = tuple(CurvePoint(k, 10, int(10 * rate), rate, 10) for k in range(1, 6))
    return PhaseCurve(algo, 20, 30, r, pts)


class TestRenderSvg:
    def test_flat_curve_at_top(self):
        svg = render_svg([flat_curve(1.0)])
        assert svg.startswith("<svg")
        assert svg.count("<polyline") == 1
        # rate 1.0 maps to the top gridline y = margin_top
        assert "40.0" in svg.split("<polyline")[1].split('"')[1]

    def test_bound_line_dashed(self):
        svg = render_svg([flat_curve()], show_bounds=True)
        assert "stroke-dasharray" in svg

    def test_no_bound_line_by_default(self):
        assert "stroke-dasharray" not in render_svg([flat_curve()])

    def test_four_curves_four_polylines_and_bounds(self):
        curves = []
        for i, r in enumerate((1, 2, 8, 16)):
            pts = tuple(
                CurvePoint(k, 10, 5, 0.5, (21 + min(k, r) - 1) // 2) for k in range(1, 21)
            )
            curves.append(PhaseCurve("combo", 20, 30, r, pts))
        svg = render_svg(curves, show_bounds=True)
        assert svg.count("<polyline") == 4
        assert svg.count("stroke-dasharray") >= 4
        assert svg.count("combo r=") == 4

    def test_legend_and_title(self):
        svg = render_svg([flat_curve(algo="rembo", r=8)], title="demo <title>")
        assert "rembo r=8" in svg
        assert "demo &lt;title&gt;" in svg

    def test_empty_input(self):
        with pytest.raises(ValueError):
            render_svg([])


class TestCli:
    def test_gen_then_solve(self, tmp_path, capsys):
        inst = tmp_path / "inst.json"
        assert main(["gen", "--m", "10", "--n", "15", "--k", "2", "--r", "3",
                     "--seed", "5", "--out", str(inst)]) == 0
        doc = json.loads(inst.read_text())
        assert doc["m"] == 10 and len(doc["A"]) == 10 and len(doc["A"][0]) == 15
        code = main(["solve", "--instance", str(inst), "--algo", "combo"])
        out = capsys.readouterr().out
        assert "recovered      : True" in out
        assert code == 0

    def test_solve_all_algorithms(self, tmp_path):
        inst = tmp_path / "inst.json"
        main(["gen", "--m", "12", "--n", "16", "--k", "2", "--r", "2",
              "--seed", "3", "--out", str(inst)])
        for algo in ("somp", "rembo", "naivecat", "combo"):
            assert main(["solve", "--instance", str(inst), "--algo", algo]) == 0

    def test_bench_plot_pipeline(self, tmp_path):
        out = tmp_path / "results.csv"
        assert main(["bench", "--m", "8", "--n", "12", "--r", "1,2", "--k", "1:2",
                     "--trials", "2", "--algos", "somp,combo", "--seed", "1",
                     "--workers", "1", "--curves", "--out", str(out)]) == 0
        assert out.exists()
        curves = str(out) + ".curves.csv"
        svg = tmp_path / "fig.svg"
        assert main(["plot", "--in", curves, "--out", str(svg), "--bound"]) == 0
        text = svg.read_text()
        assert text.startswith("<svg") and "stroke-dasharray" in text

    def test_bench_deterministic_across_workers(self, tmp_path):
        outs = []
        for i, workers in enumerate((1, 2)):
            out = tmp_path / f"r{i}.csv"
            main(["bench", "--m", "8", "--n", "12", "--r", "1", "--k", "1:2",
                  "--trials", "2", "--algos", "somp,rembo", "--seed", "42",
                  "--workers", str(workers), "--out", str(out)])
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_bounds_table(self, capsys):
        assert main(["bounds", "--m", "20", "--n", "30", "--r", "4", "--k-max", "10"]) == 0
        out = capsys.readouterr().out
        assert "spark" in out and "total_boosted" in out

    def test_usage_error_exit_1(self, capsys):
        assert main(["bench", "--k", "nope", "--out", "x.csv"]) == 1

    def test_io_error_exit_2(self, tmp_path, capsys):
        assert main(["plot", "--in", str(tmp_path / "missing.csv"), "--out", "x.svg"]) == 2

    def test_nonconvergence_exit_3(self, tmp_path):
        # k too large for m: sparse recovery fails, solve reports code 3
        inst = tmp_path / "hard.json"
        main(["gen", "--m", "6", "--n", "20", "--k", "6", "--r", "1",
              "--seed", "2", "--out", str(inst)])
        code = main(["solve", "--instance", str(inst), "--algo", "somp", "--k", "3"])
        assert code == 3
