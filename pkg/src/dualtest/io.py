"""Score CSV files and calibration snapshots.

Score CSV
    UTF-8, comma separated, header row required.  Column ``score`` holds the
    test statistic (any Python float literal, scientific notation included);
    the optional ``label`` column holds 0 or 1 and may be left empty for
    unlabelled rows.  Other columns are carried through untouched.

Snapshot
    Line-oriented ``key = value`` text.  Floats are written with ``repr`` so
    every threshold reads back to the identical double.  Lines starting with
    ``#`` and blank lines are ignored.  See ``docs/formats.md``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import NonFiniteScore, ParseError, UnsupportedVersion
from .svm import KernelParams, SvmModel
from .testing import AcceptanceRegion, CalibratedTester, TestConfig

FORMAT_VERSION = 1
SUPPORTED_VERSIONS = frozenset({1})


@dataclass(frozen=True)
class ScoreRecord:
    score: float
    label: int | None = None

    def __post_init__(self):
        if not math.isfinite(self.score):
            raise ValueError(f"score must be finite, got {self.score!r}")
        if self.label not in (None, 0, 1):
            raise ValueError(f"label must be 0, 1 or None, got {self.label!r}")


@dataclass
class ScoreTable:
    """Parsed score CSV with the original header and raw rows kept."""

    header: list[str]
    rows: list[list[str]]
    records: list[ScoreRecord]

    @property
    def scores(self) -> np.ndarray:
        return np.array([r.score for r in self.records], dtype=np.float64)

    @property
    def labelled(self) -> bool:
        return bool(self.records) and all(r.label is not None for r in self.records)

    @property
    def labels(self) -> np.ndarray:
        if not self.labelled:
            raise ParseError("file has unlabelled rows")
        return np.array([r.label for r in self.records], dtype=np.int64)


def _parse_label(text: str, row: int) -> int | None:
    text = text.strip()
    if text == "":
        return None
    if text in ("0", "1"):
        return int(text)
    raise ParseError(f"label must be 0 or 1, got {text!r}", row=row)


def read_score_table(path) -> ScoreTable:
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file, header row required", row=1) from None
        names = [h.strip() for h in header]
        if "score" not in names:
            raise ParseError("header has no 'score' column", row=1)
        si = names.index("score")
        li = names.index("label") if "label" in names else None
        rows, records = [], []
        for rownum, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and row[0].strip() == ""):
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", row=rownum)
            try:
                score = float(row[si])
            except ValueError:
                raise ParseError(f"score {row[si]!r} is not a number", row=rownum) from None
            if not math.isfinite(score):
                raise NonFiniteScore(f"score {row[si]!r} is not finite", row=rownum)
            label = _parse_label(row[li], rownum) if li is not None else None
            rows.append(row)
            records.append(ScoreRecord(score, label))
    return ScoreTable(header, rows, records)


def read_scores(path) -> list[ScoreRecord]:
    """Parse a score CSV, preserving row order."""
    return read_score_table(path).records


def write_scores(path, scores: Sequence[float], labels: Sequence[int] | None = None) -> None:
    """Write a score CSV readable by :func:`read_scores` (LF line endings)."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if labels is None:
            writer.writerow(["score"])
            writer.writerows([repr(float(s))] for s in scores)
        else:
            if len(labels) != len(scores):
                raise ValueError("scores and labels differ in length")
            writer.writerow(["score", "label"])
            writer.writerows([repr(float(s)), str(int(y))] for s, y in zip(scores, labels))


def write_points(path, points, labels) -> None:
    """Write 2-D points with +1/-1 labels as ``x1,x2,label``."""
    pts = np.asarray(points, dtype=np.float64)
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x1", "x2", "label"])
        for (a, b), y in zip(pts, labels):
            writer.writerow([repr(float(a)), repr(float(b)), str(int(y))])


def read_points(path) -> tuple[np.ndarray, np.ndarray]:
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["x1", "x2", "label"]:
            raise ParseError("expected header x1,x2,label", row=1)
        pts, labels = [], []
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                a, b, y = float(row[0]), float(row[1]), int(row[2])
            except (ValueError, IndexError):
                raise ParseError(f"malformed row {row!r}", row=rownum) from None
            if y not in (1, -1) or not (math.isfinite(a) and math.isfinite(b)):
                raise ParseError(f"invalid values in row {row!r}", row=rownum)
            pts.append((a, b))
            labels.append(y)
    return np.array(pts, dtype=np.float64).reshape(-1, 2), np.array(labels, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class CalibrationSnapshot:
    config: TestConfig
    region1: AcceptanceRegion
    region2: AcceptanceRegion
    sample_counts: tuple[int, int]
    provenance: str = ""
    model: SvmModel | None = None
    format_version: int = FORMAT_VERSION

    @classmethod
    def from_tester(cls, tester: CalibratedTester, sample_counts, provenance: str = "",
                    model: SvmModel | None = None) -> "CalibrationSnapshot":
        return cls(tester.config, tester.region1, tester.region2,
                   (int(sample_counts[0]), int(sample_counts[1])), provenance, model)

    def tester(self) -> CalibratedTester:
        return CalibratedTester(self.region1, self.region2, self.config)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CalibrationSnapshot):
            return NotImplemented
        same_model = (
            self.model is None and other.model is None
            or self.model is not None and other.model is not None
            and models_equal(self.model, other.model)
        )
        return (
            self.format_version == other.format_version
            and self.config == other.config
            and self.region1 == other.region1
            and self.region2 == other.region2
            and self.sample_counts == other.sample_counts
            and self.provenance == other.provenance
            and same_model
        )


def models_equal(a: SvmModel, b: SvmModel) -> bool:
    """Bitwise equality of everything a snapshot stores about a model."""
    return (
        a.kernel == b.kernel
        and a.c == b.c
        and a.bias == b.bias
        and a.converged == b.converged
        and a.iterations == b.iterations
        and np.array_equal(a.support_vectors, b.support_vectors)
        and np.array_equal(a.duals, b.duals)
        and np.array_equal(a.support_indices, b.support_indices)
    )


def _f(x: float) -> str:
    return repr(float(x))


def snapshot_text(snapshot: CalibrationSnapshot) -> str:
    cfg = snapshot.config
    lines = [
        "# dualtest calibration snapshot",
        f"format_version = {snapshot.format_version}",
        f"provenance = {json.dumps(snapshot.provenance)}",
        f"n1 = {snapshot.sample_counts[0]}",
        f"n2 = {snapshot.sample_counts[1]}",
        f"class1_lower_p = {_f(cfg.class1_lower_p)}",
        f"class1_upper_p = {_f(cfg.class1_upper_p)}",
        f"class2_lower_p = {_f(cfg.class2_lower_p)}",
        f"class2_upper_p = {_f(cfg.class2_upper_p)}",
        f"region1_lower = {_f(snapshot.region1.lower)}",
        f"region1_upper = {_f(snapshot.region1.upper)}",
        f"region2_lower = {_f(snapshot.region2.lower)}",
        f"region2_upper = {_f(snapshot.region2.upper)}",
    ]
    m = snapshot.model
    if m is not None:
        c = "inf" if math.isinf(m.c) else _f(m.c)
        lines += [
            f"svm.gamma = {_f(m.kernel.gamma)}",
            f"svm.c = {c}",
            f"svm.bias = {_f(m.bias)}",
            f"svm.converged = {'true' if m.converged else 'false'}",
            f"svm.iterations = {m.iterations}",
            f"svm.dim = {m.dim}",
            f"svm.n_support = {m.n_support}",
        ]
        has_idx = m.support_indices.size == m.n_support
        for k in range(m.n_support):
            coords = " ".join(_f(v) for v in m.support_vectors[k])
            idx = f" {int(m.support_indices[k])}" if has_idx else ""
            lines.append(f"svm.sv.{k} = {coords} {_f(m.duals[k])}{idx}")
    return "\n".join(lines) + "\n"


def write_snapshot(snapshot: CalibrationSnapshot, path) -> None:
    Path(path).write_text(snapshot_text(snapshot), encoding="utf-8", newline="\n")


def _parse_pairs(text: str) -> dict[str, tuple[str, int]]:
    pairs: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"expected 'key = value', got {raw!r}", row=lineno)
        key = key.strip()
        if key in pairs:
            raise ParseError(f"duplicate key {key!r}", row=lineno)
        pairs[key] = (value.strip(), lineno)
    return pairs


def parse_snapshot(text: str) -> CalibrationSnapshot:
    pairs = _parse_pairs(text)

    def get(key, conv=float, default=None):
        if key not in pairs:
            if default is not None:
                return default
            raise ParseError(f"missing key {key!r}")
        value, lineno = pairs[key]
        try:
            return conv(value)
        except (ValueError, json.JSONDecodeError):
            raise ParseError(f"bad value for {key!r}: {value!r}", row=lineno) from None

    version = get("format_version", int)
    if version not in SUPPORTED_VERSIONS:
        raise UnsupportedVersion(f"snapshot format_version {version} is not supported")
    try:
        config = TestConfig(get("class1_lower_p"), get("class1_upper_p"),
                            get("class2_lower_p"), get("class2_upper_p"))
        region1 = AcceptanceRegion(get("region1_lower"), get("region1_upper"))
        region2 = AcceptanceRegion(get("region2_lower"), get("region2_upper"))
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"invalid snapshot values: {exc}") from None

    model = None
    if "svm.gamma" in pairs:
        model = _parse_model(pairs, get)
    provenance = get("provenance", json.loads) if "provenance" in pairs else ""
    if not isinstance(provenance, str):
        raise ParseError("provenance must be a quoted string", row=pairs["provenance"][1])
    return CalibrationSnapshot(
        config=config,
        region1=region1,
        region2=region2,
        sample_counts=(get("n1", int), get("n2", int)),
        provenance=provenance,
        model=model,
        format_version=version,
    )


def _parse_model(pairs, get) -> SvmModel:
    dim = get("svm.dim", int)
    n_sv = get("svm.n_support", int)
    sv, duals, idx = [], [], []
    for k in range(n_sv):
        key = f"svm.sv.{k}"
        if key not in pairs:
            raise ParseError(f"missing key {key!r}")
        value, lineno = pairs[key]
        parts = value.split()
        if len(parts) not in (dim + 1, dim + 2):
            raise ParseError(f"{key} needs {dim} coordinates and a dual", row=lineno)
        try:
            nums = [float(p) for p in parts[:dim + 1]]
            if len(parts) == dim + 2:
                idx.append(int(parts[-1]))
        except ValueError:
            raise ParseError(f"bad number in {key}", row=lineno) from None
        sv.append(nums[:dim])
        duals.append(nums[dim])
    converged = get("svm.converged", str)
    if converged not in ("true", "false"):
        raise ParseError(f"svm.converged must be true or false, got {converged!r}")
    return SvmModel(
        support_vectors=np.array(sv, dtype=np.float64).reshape(n_sv, dim),
        duals=np.array(duals, dtype=np.float64),
        bias=get("svm.bias"),
        kernel=KernelParams(get("svm.gamma")),
        c=get("svm.c"),
        converged=converged == "true",
        iterations=get("svm.iterations", int),
        support_indices=np.array(idx if len(idx) == n_sv else [], dtype=np.int64),
    )


def read_snapshot(path) -> CalibrationSnapshot:
    return parse_snapshot(Path(path).read_text(encoding="utf-8"))
