"""Deterministic SVG rendering of charts."""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .chart import INF, BiDegree, Chart, ChartError, SyntheticClass, min_kill_page

PALETTE = {2: "#1f77b4", 3: "#d62728", 5: "#2ca02c", 7: "#9467bd", 9: "#ff7f0e", 23: "#8c564b"}
BUDGET = 40000  # grid squares


class LayoutError(ValueError):
    pass


@dataclass
class RenderOptions:
    window: tuple[int, int, int, int] | None = None
    unit: int = 24
    labels: bool = True
    margin: int = 30


def _fmt(x: float) -> str:
    return f"{x:.1f}".rstrip("0").rstrip(".")


def _color(page) -> str:
    if page == INF:
        return "#000000"
    return PALETTE.get(page, "#7f7f7f")


def render_chart(chart: Chart, options: RenderOptions | None = None) -> str:
    opt = options or RenderOptions()
    s0, s1, f0, f1 = opt.window or chart.window
    w, h = s1 - s0 + 1, f1 - f0 + 1
    if w * h > BUDGET:
        half = s0 + w // 2
        raise LayoutError(
            f"window {w} x {h} exceeds the layout budget of {BUDGET} squares; "
            f"split it, e.g. stems {s0}..{half - 1} and {half}..{s1}"
        )
    u, m = opt.unit, opt.margin
    width, height = w * u + 2 * m, h * u + 2 * m

    def xy(bd: BiDegree, k: int = 0, n: int = 1):
        off = (k - (n - 1) / 2) * u * 0.25
        return m + (bd.stem - s0 + 0.5) * u + off, height - m - (bd.filtration - f0 + 0.5) * u

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f"<title>{escape(chart.name)}</title>",
        '<g stroke="#dddddd" stroke-width="0.5">',
    ]
    for i in range(w + 1):
        x = m + i * u
        out.append(f'<line x1="{x}" y1="{m}" x2="{x}" y2="{height - m}"/>')
    for j in range(h + 1):
        y = m + j * u
        out.append(f'<line x1="{m}" y1="{y}" x2="{width - m}" y2="{y}"/>')
    out.append("</g>")
    out.append('<g font-family="monospace" font-size="9" fill="#555555">')
    for i in range(0, w, max(1, w // 20)):
        out.append(f'<text x="{_fmt(m + (i + 0.5) * u)}" y="{height - m + 12}" text-anchor="middle">{s0 + i}</text>')
    for j in range(0, h, max(1, h // 20)):
        out.append(f'<text x="{m - 4}" y="{_fmt(height - m - (j + 0.5) * u + 3)}" text-anchor="end">{f0 + j}</text>')
    out.append("</g>")

    inside = [bd for bd in sorted(chart.cells) if s0 <= bd.stem <= s1 and f0 <= bd.filtration <= f1]
    arrows = []
    for d in sorted(chart.differentials, key=lambda d: (d.page, d.source)):
        if d.source in inside and d.target in inside:
            arrows.append(d)
    for d in arrows:
        x1, y1 = xy(d.source)
        x2, y2 = xy(d.target)
        out.append(
            f'<line class="d{d.page}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{_color(d.page)}" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt((x1 + x2) / 2 + 3)}" y="{_fmt((y1 + y2) / 2)}" font-size="8" '
            f'fill="{_color(d.page)}">d{d.page}</text>'
        )
    for bd in inside:
        cell = chart.cell(bd)
        names = cell.names
        for k, name in enumerate(names):
            x, y = xy(bd, k, len(names))
            order = cell.generators[k][1]
            try:
                page = min_kill_page(SyntheticClass.named(chart, name)) if chart.differentials else INF
            except ChartError:
                page = INF
            fill = _color(page)
            if order == 0:
                out.append(f'<rect class="class" x="{_fmt(x - 3)}" y="{_fmt(y - 3)}" width="6" height="6" fill="{fill}"/>')
            else:
                out.append(f'<circle class="class" cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="{fill}"/>')
            if opt.labels:
                out.append(f'<text x="{_fmt(x + 4)}" y="{_fmt(y - 4)}" font-size="7">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
