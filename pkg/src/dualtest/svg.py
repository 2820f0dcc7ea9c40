"""Plain-text SVG figures: class histograms with thresholds, and region maps.

Output is deterministic: coordinates are printed at fixed precision and
threshold values are echoed in full in a ``data-value`` attribute.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .empirical import EmpiricalDistribution
from .testing import CalibratedTester, Decision

DECISION_COLORS = {
    Decision.CLASS1: "#9ecae1",
    Decision.CLASS2: "#fdae6b",
    Decision.UNCERTAIN_OVERLAP: "#bdbdbd",
    Decision.UNCERTAIN_OUTLIER: "#fff176",
}
CLASS_COLORS = ("#3182bd", "#e6550d")


def _n(v: float) -> str:
    return f"{v:.3f}"


def _open(width: int, height: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]


def _text(x: float, y: float, s: str, anchor: str = "middle", size: int | None = None) -> str:
    extra = f' font-size="{size}"' if size else ""
    return f'<text x="{_n(x)}" y="{_n(y)}" text-anchor="{anchor}"{extra}>{escape(s)}</text>'


@dataclass(frozen=True)
class HistogramPanel:
    title: str
    dist1: EmpiricalDistribution
    dist2: EmpiricalDistribution
    tester: CalibratedTester | None = None


def threshold_lines(tester: CalibratedTester) -> list[tuple[float, str]]:
    """``(value, style)`` pairs: solid bounds the overlap, dashed the outer edges.

    When the regions are disjoint the inner endpoints bound a type II gap and
    are drawn dashed as well.
    """
    r1, r2 = tester.region1, tester.region2
    out = [(min(r1.lower, r2.lower), "dashed"), (max(r1.upper, r2.upper), "dashed")]
    inner = sorted([max(r1.lower, r2.lower), min(r1.upper, r2.upper)])
    style = "solid" if tester.overlap is not None else "dashed"
    out += [(inner[0], style), (inner[1], style)]
    return sorted(out, key=lambda p: (p[0], p[1]))


def histogram_svg(panels: Sequence[HistogramPanel], bins: int = 40,
                  width: int = 640, panel_height: int = 220) -> str:
    """Stacked panels, each overlaying both class histograms on a shared axis."""
    margin_l, margin_r, margin_t, margin_b = 50, 20, 28, 30
    height = panel_height * len(panels)
    parts = _open(width, height)
    plot_w = width - margin_l - margin_r
    for k, panel in enumerate(panels):
        top = k * panel_height + margin_t
        plot_h = panel_height - margin_t - margin_b
        lo = min(panel.dist1.min, panel.dist2.min)
        hi = max(panel.dist1.max, panel.dist2.max)
        if panel.tester is not None:
            vals = [v for v, _ in threshold_lines(panel.tester)]
            lo, hi = min(lo, *vals), max(hi, *vals)
        pad = 0.05 * (hi - lo) if hi > lo else 0.5
        lo, hi = lo - pad, hi + pad

        def sx(v: float) -> float:
            return margin_l + (v - lo) / (hi - lo) * plot_w

        # shared bin edges so the two classes are comparable
        edges = np.linspace(lo, hi, bins + 1)
        c1, _ = np.histogram(panel.dist1.sorted_values, bins=edges)
        c2, _ = np.histogram(panel.dist2.sorted_values, bins=edges)
        peak = max(int(c1.max()), int(c2.max()), 1)
        parts.append(f'<g class="panel" data-title={quoteattr(panel.title)}>')
        parts.append(_text(width / 2, top - 10, panel.title, size=12))
        base = top + plot_h
        parts.append(f'<line x1="{_n(margin_l)}" y1="{_n(base)}" x2="{_n(margin_l + plot_w)}" '
                     f'y2="{_n(base)}" stroke="black"/>')
        for cls, counts in ((0, c1), (1, c2)):
            for i, cnt in enumerate(counts):
                if not cnt:
                    continue
                h = cnt / peak * plot_h
                parts.append(
                    f'<rect class="bar class{cls + 1}" x="{_n(sx(edges[i]))}" y="{_n(base - h)}" '
                    f'width="{_n(sx(edges[i + 1]) - sx(edges[i]))}" height="{_n(h)}" '
                    f'fill="{CLASS_COLORS[cls]}" fill-opacity="0.5" data-count="{int(cnt)}"/>'
                )
        for v in np.linspace(lo, hi, 5):
            parts.append(_text(sx(v), base + 14, f"{v:.2f}"))
        if panel.tester is not None:
            for value, style in threshold_lines(panel.tester):
                dash = ' stroke-dasharray="6,4"' if style == "dashed" else ""
                parts.append(
                    f'<line class="threshold {style}" x1="{_n(sx(value))}" y1="{_n(top)}" '
                    f'x2="{_n(sx(value))}" y2="{_n(base)}" stroke="black" stroke-width="1.5"'
                    f'{dash} data-value="{value!r}"/>'
                )
        parts.append(
            f'<g class="axis" data-lo="{lo!r}" data-hi="{hi!r}" data-x0="{margin_l}" '
            f'data-width="{plot_w}"/>'
        )
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def region_map_svg(codes: np.ndarray, x_range, y_range, title: str = "",
                   points=None, labels=None, size: int = 480) -> str:
    """Colour each grid cell by its decision code; optionally overlay data.

    ``codes[i, j]`` is the decision at row ``i`` (y ascending) and column
    ``j`` (x ascending).  Runs of equal cells along a row share one rect.
    """
    codes = np.asarray(codes)
    ny, nx = codes.shape
    margin_t = 24
    parts = _open(size, size + margin_t)
    parts.append(_text(size / 2, 16, title, size=12))
    cw, ch = size / nx, size / ny
    for i in range(ny):
        y = margin_t + size - (i + 1) * ch
        j = 0
        while j < nx:
            k = j
            while k + 1 < nx and codes[i, k + 1] == codes[i, j]:
                k += 1
            d = Decision.from_code(int(codes[i, j]))
            parts.append(
                f'<rect class="cell {d.value}" x="{_n(j * cw)}" y="{_n(y)}" '
                f'width="{_n((k - j + 1) * cw)}" height="{_n(ch)}" fill="{DECISION_COLORS[d]}" '
                f'data-row="{i}" data-col="{j}" data-span="{k - j + 1}"/>'
            )
            j = k + 1
    if points is not None:
        (x0, x1), (y0, y1) = x_range, y_range
        pts = np.asarray(points, dtype=np.float64)
        for (px, py), y in zip(pts, labels):
            cx = (px - x0) / (x1 - x0) * size
            cy = margin_t + size - (py - y0) / (y1 - y0) * size
            if y > 0:
                parts.append(f'<circle class="point c1" cx="{_n(cx)}" cy="{_n(cy)}" r="2" fill="black"/>')
            else:
                parts.append(
                    f'<path class="point c2" d="M{_n(cx - 2)},{_n(cy - 2)}L{_n(cx + 2)},{_n(cy + 2)}'
                    f'M{_n(cx - 2)},{_n(cy + 2)}L{_n(cx + 2)},{_n(cy - 2)}" stroke="black"/>'
                )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
