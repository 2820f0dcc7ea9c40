"""Command-line interface.

Subcommands::

    dualtest spiral     spiral benchmark: SVM, three quantile settings, SVG figures
    dualtest calibrate  labelled score CSV -> calibration snapshot
    dualtest decide     snapshot + score CSV -> per-row decisions CSV
    dualtest evaluate   coverage / accuracy table over one or more alphas
    dualtest gen        export a synthetic spiral or score-mixture CSV

Exit status: 0 success, 1 usage error, 2 data error, 3 SVM did not converge
(artifacts are still written).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import io as dio
from .datasets import ScoreMixtureSpec, SpiralSpec, generate_scores, generate_spiral
from .empirical import DEFAULT_MIN_COUNT, split_by_label
from .errors import DualTestError
from .experiments import DEFAULT_C, DEFAULT_GAMMA, DEFAULT_RESOLUTION, DEFAULT_SEED, run_spiral
from .metrics import SelectiveReport, evaluate
from .svg import HistogramPanel, histogram_svg, region_map_svg
from .svm import KernelParams, SmoSettings
from .testing import (
    DEFAULT_ALPHAS,
    EXPERIMENT_CONFIGS,
    CalibratedTester,
    TestConfig,
    calibrate,
    decide_batch,
    rejection_rates,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NONCONVERGED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _pct(p: float) -> str:
    return f"{100 * p:g}"


def _fmt(v: float | None) -> str:
    return "n/a" if v is None else f"{100 * v:.2f}"


def _add_quantile_flags(p: argparse.ArgumentParser) -> None:
    for flag in ("--q1-lo", "--q1-hi", "--q2-lo", "--q2-hi"):
        p.add_argument(flag, type=float, help="quantile point in (0, 1)")


def _explicit_config(args) -> TestConfig | None:
    pts = (args.q1_lo, args.q1_hi, args.q2_lo, args.q2_hi)
    if all(v is None for v in pts):
        return None
    if any(v is None for v in pts):
        raise UsageError("--q1-lo, --q1-hi, --q2-lo and --q2-hi must be given together")
    return TestConfig(*pts)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dualtest", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spiral", help="spiral benchmark with region maps")
    sp.add_argument("--out-dir", type=Path, default=Path("spiral_out"))
    sp.add_argument("--c", type=float, default=DEFAULT_C, help="SVM box constraint")
    sp.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help="RBF kernel width")
    sp.add_argument("--tol", type=float, default=1e-3, help="SMO KKT tolerance")
    sp.add_argument("--max-passes", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seeds both data and SMO")
    sp.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    sp.add_argument("--bins", type=int, default=40)
    sp.add_argument("--n-per-class", type=int, default=200)
    sp.add_argument("--turns", type=float, default=1.75)
    sp.add_argument("--noise", type=float, default=0.05)
    _add_quantile_flags(sp)

    cp = sub.add_parser("calibrate", help="calibrate acceptance regions from labelled scores")
    cp.add_argument("--scores", type=Path, required=True)
    cp.add_argument("--snapshot", type=Path, required=True, help="output snapshot path")
    cp.add_argument("--alpha", type=float, help="common significance level (default 0.025)")
    _add_quantile_flags(cp)
    cp.add_argument("--min-count", type=int, default=DEFAULT_MIN_COUNT)
    cp.add_argument("--provenance", default=None)

    dp = sub.add_parser("decide", help="apply a snapshot to scores")
    dp.add_argument("--snapshot", type=Path, required=True)
    dp.add_argument("--scores", type=Path, required=True)
    dp.add_argument("--output", type=Path, help="CSV path (default stdout)")
    dp.add_argument("--merge-uncertain", action="store_true")

    ep = sub.add_parser("evaluate", help="coverage and selective metrics table")
    ep.add_argument("--scores", type=Path, required=True, help="labelled evaluation scores")
    src = ep.add_mutually_exclusive_group(required=True)
    src.add_argument("--snapshot", type=Path)
    src.add_argument("--train", type=Path, help="labelled calibration scores")
    ep.add_argument("--alpha", type=float, nargs="+", help="significance levels for --train")
    ep.add_argument("--positive-class", type=int, choices=(0, 1), default=1)
    ep.add_argument("--merge-uncertain", action="store_true")
    ep.add_argument("--min-count", type=int, default=DEFAULT_MIN_COUNT)

    gp = sub.add_parser("gen", help="export a synthetic dataset")
    gsub = gp.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    gs = gsub.add_parser("scores")
    gs.add_argument("--output", type=Path, required=True)
    gs.add_argument("--mean1", type=float, default=-3.0)
    gs.add_argument("--mean2", type=float, default=3.0)
    gs.add_argument("--sigma1", type=float, default=1.0)
    gs.add_argument("--sigma2", type=float, default=1.0)
    gs.add_argument("--n1", type=int, default=10_000)
    gs.add_argument("--n2", type=int, default=10_000)
    gs.add_argument("--outlier-fraction", type=float, default=0.0)
    gs.add_argument("--outlier-shift", type=float, default=0.0)
    gs.add_argument("--seed", type=int, default=0)
    gsp = gsub.add_parser("spiral")
    gsp.add_argument("--output", type=Path, required=True)
    gsp.add_argument("--n-per-class", type=int, default=200)
    gsp.add_argument("--turns", type=float, default=1.75)
    gsp.add_argument("--noise", type=float, default=0.05)
    gsp.add_argument("--seed", type=int, default=7)
    return parser


def cmd_spiral(args, out) -> int:
    try:
        spec = SpiralSpec(args.n_per_class, args.turns, args.noise, 1.0, args.seed)
        kernel = KernelParams(args.gamma)
        settings = SmoSettings(args.c, args.tol, args.max_passes, args.seed)
        configs = dict(EXPERIMENT_CONFIGS)
        custom = _explicit_config(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if custom is not None:
        configs["custom"] = custom
    if args.resolution < 2 or args.bins < 1:
        raise UsageError("--resolution must be >= 2 and --bins >= 1")

    run = run_spiral(spec, kernel, settings, configs, resolution=args.resolution)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    m = run.model
    print(f"svm: n={run.points.shape[0]} support_vectors={m.n_support} bias={m.bias:.6g} "
          f"iterations={m.iterations} converged={'yes' if m.converged else 'NO'}", file=out)

    panels = []
    for name, tester in run.testers.items():
        cfg = tester.config
        print(f"experiment {name}: test1 ({_pct(cfg.class1_lower_p)}, {_pct(cfg.class1_upper_p)}) "
              f"test2 ({_pct(cfg.class2_lower_p)}, {_pct(cfg.class2_upper_p)}) "
              f"region1 [{tester.region1.lower:.6g}, {tester.region1.upper:.6g}] "
              f"region2 [{tester.region2.lower:.6g}, {tester.region2.upper:.6g}]", file=out)
        counts = np.bincount(run.codes[name].ravel(), minlength=4)
        print(f"  grid cells: class1={counts[1]} class2={counts[2]} "
              f"uncertain_overlap={counts[3]} uncertain_outlier={counts[0]}", file=out)
        panels.append(HistogramPanel(f"Experiment ({name})", run.dist1, run.dist2, tester))

    written = []
    path = args.out_dir / "spiral_histogram.svg"
    path.write_text(histogram_svg(panels, bins=args.bins), encoding="utf-8")
    written.append(path)
    maps = [("svm", "Plain SVM", run.baseline_codes)]
    maps += [(name, f"Experiment ({name})", run.codes[name]) for name in run.testers]
    for name, title, codes in maps:
        path = args.out_dir / f"spiral_region_{name}.svg"
        path.write_text(region_map_svg(codes, run.x_range, run.y_range, title,
                                       run.points, run.labels), encoding="utf-8")
        written.append(path)
    for p in written:
        print(f"wrote {p}", file=out)
    return EXIT_OK if m.converged else EXIT_NONCONVERGED


def _labelled(table: dio.ScoreTable, path: Path) -> tuple[np.ndarray, np.ndarray]:
    if not table.records:
        raise dio.ParseError(f"{path}: no score rows")
    if not table.labelled:
        raise dio.ParseError(f"{path}: every row needs a 0/1 label")
    return table.scores, table.labels


def cmd_calibrate(args, out) -> int:
    custom = _explicit_config(args)
    if custom is not None and args.alpha is not None:
        raise UsageError("give either --alpha or the four quantile flags, not both")
    try:
        config = custom or TestConfig.symmetric(0.025 if args.alpha is None else args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    scores, labels = _labelled(dio.read_score_table(args.scores), args.scores)
    dist1, dist2 = split_by_label(scores, labels, min_count=args.min_count)
    tester = calibrate(dist1, dist2, config)
    provenance = args.provenance if args.provenance is not None else f"scores: {args.scores.name}"
    snap = dio.CalibrationSnapshot.from_tester(tester, (dist1.count, dist2.count), provenance)
    dio.write_snapshot(snap, args.snapshot)
    print(f"config: test1 ({config.class1_lower_p!r}, {config.class1_upper_p!r}) "
          f"test2 ({config.class2_lower_p!r}, {config.class2_upper_p!r})", file=out)
    for k, (dist, region) in enumerate(((dist1, tester.region1), (dist2, tester.region2)), start=1):
        below, above = rejection_rates(dist, region)
        print(f"class{k}: n={dist.count} region=[{region.lower!r}, {region.upper!r}] "
              f"self_rejection={below + above:.6f} (below {below:.6f}, above {above:.6f})", file=out)
    print(f"wrote {args.snapshot}", file=out)
    return EXIT_OK


def cmd_decide(args, out) -> int:
    snap = dio.read_snapshot(args.snapshot)
    table = dio.read_score_table(args.scores)
    decisions = decide_batch(table.scores, snap.tester())
    fh = args.output.open("w", encoding="utf-8", newline="") if args.output else out
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.header + ["decision"])
        for row, d in zip(table.rows, decisions):
            writer.writerow(row + [d.merged_name() if args.merge_uncertain else d.value])
    finally:
        if args.output:
            fh.close()
    return EXIT_OK


TABLE_COLUMNS = ("alpha(%)", "coverage(%)", "accuracy(%)", "recall(%)", "precision(%)",
                 "specificity(%)", "f1(%)")


def _config_label(config: TestConfig) -> str:
    if (config.class1_lower_p == config.class2_lower_p
            and config.class1_upper_p == config.class2_upper_p
            and math.isclose(config.class1_lower_p, 1.0 - config.class1_upper_p, abs_tol=1e-12)):
        return _pct(config.class1_lower_p)
    return (f"{_pct(config.class1_lower_p)}-{_pct(config.class1_upper_p)}/"
            f"{_pct(config.class2_lower_p)}-{_pct(config.class2_upper_p)}")


def report_row(label: str, report: SelectiveReport, merge: bool) -> list[str]:
    row = [label, _fmt(report.coverage), _fmt(report.accuracy), _fmt(report.recall),
           _fmt(report.precision), _fmt(report.specificity), _fmt(report.f1)]
    if merge:
        row.append(str(report.abstained))
    else:
        row += [str(report.abstained_overlap), str(report.abstained_outlier)]
    return row


def cmd_evaluate(args, out) -> int:
    scores, labels = _labelled(dio.read_score_table(args.scores), args.scores)
    testers: list[tuple[str, CalibratedTester]] = []
    if args.snapshot is not None:
        if args.alpha:
            raise UsageError("--alpha applies only with --train")
        tester = dio.read_snapshot(args.snapshot).tester()
        testers.append((_config_label(tester.config), tester))
    else:
        tr_scores, tr_labels = _labelled(dio.read_score_table(args.train), args.train)
        dist1, dist2 = split_by_label(tr_scores, tr_labels, min_count=args.min_count)
        try:
            configs = [TestConfig.symmetric(a) for a in (args.alpha or DEFAULT_ALPHAS)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        testers += [(_config_label(c), calibrate(dist1, dist2, c)) for c in configs]

    header = list(TABLE_COLUMNS) + (["uncertain"] if args.merge_uncertain
                                    else ["overlap", "outlier"])
    rows = [header]
    for label, tester in testers:
        report = evaluate(decide_batch(scores, tester), labels.tolist(), args.positive_class)
        rows.append(report_row(label, report, args.merge_uncertain))
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    for r in rows:
        print("  ".join(cell.rjust(w) for cell, w in zip(r, widths)), file=out)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    try:
        if args.kind == "scores":
            spec = ScoreMixtureSpec(args.mean1, args.mean2, args.sigma1, args.sigma2, args.n1,
                                    args.n2, args.outlier_fraction, args.outlier_shift, args.seed)
        else:
            spec = SpiralSpec(args.n_per_class, args.turns, args.noise, 1.0, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.kind == "scores":
        scores, labels = generate_scores(spec)
        dio.write_scores(args.output, scores, labels)
    else:
        points, labels = generate_spiral(spec)
        dio.write_points(args.output, points, labels)
    print(f"wrote {args.output}", file=out)
    return EXIT_OK


COMMANDS = {
    "spiral": cmd_spiral,
    "calibrate": cmd_calibrate,
    "decide": cmd_decide,
    "evaluate": cmd_evaluate,
    "gen": cmd_gen,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except BrokenPipeError:
        return EXIT_OK
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DualTestError, OSError, ValueError) as exc:
        print(f"dualtest: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
