import csv
import io
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from dualtest import io as dio
from dualtest.cli import main
from dualtest.datasets import ScoreMixtureSpec, generate_scores
from dualtest.empirical import split_by_label
from dualtest.metrics import evaluate
from dualtest.testing import TestConfig, calibrate, decide_batch

from oracles import quantile_by_scan

SVG = "{http://www.w3.org/2000/svg}"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def spiral_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("spiral")
    code, text = run("spiral", "--out-dir", d)
    return d, code, text


@pytest.fixture
def mixture_csv(tmp_path):
    s, y = generate_scores(ScoreMixtureSpec(-2, 2, 1, 1, 2000, 2000, 0.05, 4.0, seed=1))
    p = tmp_path / "mix.csv"
    dio.write_scores(p, s, y)
    return p, s, y


class TestSpiral:
    def test_artifacts(self, spiral_dir):
        d, code, text = spiral_dir
        assert code == 0
        names = sorted(p.name for p in d.glob("*.svg"))
        assert names == ["spiral_histogram.svg", "spiral_region_i.svg", "spiral_region_ii.svg",
                         "spiral_region_iii.svg", "spiral_region_svm.svg"]

    def test_echoes_experiment_points(self, spiral_dir):
        text = spiral_dir[2]
        assert "experiment i: test1 (2.5, 97.5) test2 (2.5, 97.5)" in text
        assert "experiment ii: test1 (5, 97.5) test2 (2.5, 95)" in text
        assert "experiment iii: test1 (5, 99) test2 (1, 95)" in text

    def test_well_formed_and_four_colours(self, spiral_dir):
        d = spiral_dir[0]
        for p in d.glob("*.svg"):
            ET.parse(p)
        root = ET.parse(d / "spiral_region_i.svg").getroot()
        kinds = {c.get("class").split()[1] for c in root.iter(f"{SVG}rect") if (c.get("class") or "").startswith("cell")}
        assert kinds == {"class1", "class2", "uncertain_overlap", "uncertain_outlier"}
        root = ET.parse(d / "spiral_region_svm.svg").getroot()
        kinds = {c.get("class").split()[1] for c in root.iter(f"{SVG}rect") if (c.get("class") or "").startswith("cell")}
        assert kinds == {"class1", "class2"}

    def test_threshold_lines_affine(self, spiral_dir):
        root = ET.parse(spiral_dir[0] / "spiral_histogram.svg").getroot()
        panels = [g for g in root.iter(f"{SVG}g") if g.get("class") == "panel"]
        assert len(panels) == 3
        for panel in panels:
            axis = next(g for g in panel.iter(f"{SVG}g") if g.get("class") == "axis")
            lo, hi = float(axis.get("data-lo")), float(axis.get("data-hi"))
            x0, width = float(axis.get("data-x0")), float(axis.get("data-width"))
            lines = [l for l in panel.iter(f"{SVG}line") if "threshold" in (l.get("class") or "")]
            assert len(lines) == 4
            for line in lines:
                v = float(line.get("data-value"))
                assert float(line.get("x1")) == pytest.approx(x0 + (v - lo) / (hi - lo) * width, abs=1e-3)

    def test_byte_identical_rerun(self, spiral_dir, tmp_path):
        code, _ = run("spiral", "--out-dir", tmp_path)
        assert code == 0
        for p in spiral_dir[0].glob("*.svg"):
            assert (tmp_path / p.name).read_bytes() == p.read_bytes()

    def test_nonconvergence_exit(self, tmp_path):
        code, text = run("spiral", "--out-dir", tmp_path, "--max-passes", "1", "--tol", "1e-12",
                         "--resolution", "10", "--n-per-class", "60")
        assert code == 3
        assert "converged=NO" in text
        assert (tmp_path / "spiral_region_i.svg").exists()

    def test_custom_points(self, tmp_path):
        code, text = run("spiral", "--out-dir", tmp_path, "--resolution", "10",
                         "--q1-lo", "0.1", "--q1-hi", "0.9", "--q2-lo", "0.1", "--q2-hi", "0.9")
        assert code == 0 and "experiment custom: test1 (10, 90)" in text
        assert (tmp_path / "spiral_region_custom.svg").exists()


class TestCalibrate:
    def test_thresholds_match_oracle(self, mixture_csv, tmp_path):
        path, s, y = mixture_csv
        snap_path = tmp_path / "snap.txt"
        code, text = run("calibrate", "--scores", path, "--snapshot", snap_path, "--alpha", "0.025")
        assert code == 0
        assert "config: test1 (0.025, 0.975) test2 (0.025, 0.975)" in text
        snap = dio.read_snapshot(snap_path)
        c1, c2 = s[y == 0].tolist(), s[y == 1].tolist()
        assert snap.region1.lower == quantile_by_scan(c1, 0.025)
        assert snap.region1.upper == quantile_by_scan(c1, 0.975)
        assert snap.region2.lower == quantile_by_scan(c2, 0.025)
        assert snap.region2.upper == quantile_by_scan(c2, 0.975)
        assert snap.sample_counts == (2000, 2000)
        assert "self_rejection=" in text

    def test_single_class(self, tmp_path):
        p = tmp_path / "one.csv"
        dio.write_scores(p, np.arange(50.0), [0] * 50)
        code, _ = run("calibrate", "--scores", p, "--snapshot", tmp_path / "s.txt")
        assert code == 2

    def test_explicit_points(self, mixture_csv, tmp_path):
        code, _ = run("calibrate", "--scores", mixture_csv[0], "--snapshot", tmp_path / "s.txt",
                      "--q1-lo", "0.05", "--q1-hi", "0.99", "--q2-lo", "0.01", "--q2-hi", "0.95")
        assert code == 0
        assert dio.read_snapshot(tmp_path / "s.txt").config == TestConfig(0.05, 0.99, 0.01, 0.95)

    @pytest.mark.parametrize("extra", [["--alpha", "0.7"], ["--q1-lo", "0.1"], ["--alpha", "0.1", "--q1-lo", "0.1",
                                       "--q1-hi", "0.9", "--q2-lo", "0.1", "--q2-hi", "0.9"]])
    def test_usage_errors(self, mixture_csv, tmp_path, extra):
        code, _ = run("calibrate", "--scores", mixture_csv[0], "--snapshot", tmp_path / "s.txt", *extra)
        assert code == 1


class TestEvaluate:
    def test_alpha_sweep(self, mixture_csv):
        path = mixture_csv[0]
        code, text = run("evaluate", "--scores", path, "--train", path)
        assert code == 0
        lines = text.strip().splitlines()
        assert len(lines) == 4
        assert [l.split()[0] for l in lines[1:]] == ["1", "2.5", "5"]
        for line in lines[1:]:
            values = [float(v) for v in line.split()[1:7]]
            assert all(0.0 <= v <= 100.0 for v in values)

    def test_matches_metrics(self, mixture_csv):
        path, s, y = mixture_csv
        code, text = run("evaluate", "--scores", path, "--train", path, "--alpha", "0.05")
        d1, d2 = split_by_label(s, y)
        report = evaluate(decide_batch(s, calibrate(d1, d2, TestConfig.symmetric(0.05))), y.tolist())
        row = text.strip().splitlines()[1].split()
        expected = [report.coverage, report.accuracy, report.recall, report.precision,
                    report.specificity, report.f1]
        assert [float(v) for v in row[1:7]] == [float(f"{100 * v:.2f}") for v in expected]
        assert int(row[7]) == report.abstained_overlap and int(row[8]) == report.abstained_outlier

    def test_perfect_separation(self, tmp_path):
        s, y = generate_scores(ScoreMixtureSpec(-20, 20, 1, 1, 2000, 2000, seed=4))
        train_p, test_p = tmp_path / "tr.csv", tmp_path / "te.csv"
        dio.write_scores(train_p, s, y)
        # evaluate on class centres, well inside both acceptance regions
        dio.write_scores(test_p, [-20.0] * 10 + [20.0] * 10, [0] * 10 + [1] * 10)
        code, text = run("evaluate", "--scores", test_p, "--train", train_p, "--merge-uncertain")
        assert code == 0
        for line in text.strip().splitlines()[1:]:
            cols = line.split()
            assert float(cols[1]) == 100.0 and float(cols[2]) == 100.0 and cols[-1] == "0"

    def test_snapshot_mode(self, mixture_csv, tmp_path):
        snap = tmp_path / "s.txt"
        run("calibrate", "--scores", mixture_csv[0], "--snapshot", snap, "--alpha", "0.01")
        code, text = run("evaluate", "--scores", mixture_csv[0], "--snapshot", snap)
        assert code == 0 and text.strip().splitlines()[1].split()[0] == "1"

    def test_empty_file(self, tmp_path, mixture_csv):
        p = tmp_path / "empty.csv"
        p.write_text("score,label\n")
        code, _ = run("evaluate", "--scores", p, "--train", mixture_csv[0])
        assert code == 2


class TestDecide:
    def test_straddling_rows(self, fixtures_dir, tmp_path):
        out = tmp_path / "d.csv"
        code, _ = run("decide", "--snapshot", fixtures_dir / "minimal_snapshot.txt",
                      "--scores", fixtures_dir / "straddle.csv", "--output", out)
        assert code == 0
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["id", "score", "label", "decision"]
        assert [r[3] for r in rows[1:]] == [
            "class1", "uncertain_outlier", "class1", "uncertain_overlap", "uncertain_overlap",
            "uncertain_overlap", "class2", "class2", "uncertain_outlier"]
        assert len(rows) - 1 == len(dio.read_scores(fixtures_dir / "straddle.csv"))

    def test_merged_and_idempotent(self, fixtures_dir, tmp_path):
        args = ["decide", "--snapshot", fixtures_dir / "minimal_snapshot.txt",
                "--scores", fixtures_dir / "straddle.csv", "--merge-uncertain"]
        code, first = run(*args)
        _, second = run(*args)
        assert code == 0 and first == second
        assert {line.rsplit(",", 1)[1] for line in first.strip().splitlines()[1:]} == {
            "class1", "class2", "uncertain"}
        run(*args, "--output", tmp_path / "a.csv")
        run(*args, "--output", tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_bad_snapshot(self, fixtures_dir, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("format_version = 999\n")
        code, _ = run("decide", "--snapshot", bad, "--scores", fixtures_dir / "straddle.csv")
        assert code == 2


class TestGen:
    def test_scores(self, tmp_path):
        p = tmp_path / "g.csv"
        assert run("gen", "scores", "--output", p, "--n1", "100", "--n2", "50")[0] == 0
        table = dio.read_score_table(p)
        assert table.labels.tolist() == [0] * 100 + [1] * 50

    def test_spiral(self, tmp_path):
        p = tmp_path / "s.csv"
        assert run("gen", "spiral", "--output", p, "--n-per-class", "25")[0] == 0
        pts, lab = dio.read_points(p)
        assert pts.shape == (50, 2)

    def test_invalid_spec(self, tmp_path):
        assert run("gen", "scores", "--output", tmp_path / "x.csv", "--n1", "0")[0] == 1


def test_usage_error_exit_code():
    assert run("frobnicate")[0] == 1
    assert run()[0] == 1
