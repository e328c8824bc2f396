"""
src/plotting.py

Self-contained SVG rendering, no plotting library. Output is plain text
with fixed number formatting, so the same input gives the same bytes on
every platform.

    render_edpois_svg()  — one configuration family: a lattice of small
                           panels on the (Cr, F) grid, each showing the
                           sorted POIS bars of its run series
    render_pmax_svg()    — shaded regions p ∈ [0, p_max(t, n)], one per n
"""

import logging
from collections import defaultdict
from html import escape
from itertools import product
from pathlib import Path

from src.analysis import ColorClass, PmaxTable, classify
from src.errors import MissingCellsError

logger = logging.getLogger(__name__)

CLASS_COLORS = {
    ColorClass.TEAL: "#008080",
    ColorClass.ORANGE: "#ff8c00",
    ColorClass.VIOLET: "#8a2be2",
}
MARKER_COLOR = "#1f4fd8"
SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]
FONT = 'font-family="Arial"'

PANEL_WIDTH = 96
PANEL_HEIGHT = 64
PANEL_GAP = 12
MARGIN_LEFT = 80
MARGIN_TOP = 60
MARGIN_RIGHT = 150
MARGIN_BOTTOM = 60

F_AXIS_MAX = 2.0
CR_AXIS_MAX = 1.0


def _open_svg(width: float, height: float) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
    ]


def _legend(lines: list[str], x: float, y: float, entries: list[tuple[str, str]]):
    for i, (label, color) in enumerate(entries):
        ly = y + i * 22
        lines.append(f'<rect x="{x:.2f}" y="{ly - 10:.2f}" width="14" height="14" fill="{color}"/>')
        lines.append(
            f'<text x="{x + 20:.2f}" y="{ly + 2:.2f}" font-size="13" {FONT}>{escape(label)}</text>'
        )


# ── EDPOIS small multiples ────────────────────────────────────────────────────

def _cells(rows) -> dict[tuple[float, float], list[float]]:
    """POIS values per (F, Cr), in run-index order; failed runs are skipped."""
    cells = defaultdict(list)
    for row in sorted(rows, key=lambda r: (r.scale_factor, r.crossover_rate, r.run_index)):
        if not row.failed:
            cells[(row.scale_factor, row.crossover_rate)].append(row.pois)
    return cells


def render_edpois_svg(rows, title: str, f_values=None, cr_values=None) -> str:
    """
    Render one (mutation, crossover, strategy, N) family.

    Panels sit on the lattice of (Cr, F) values: Cr grows to the right, F
    grows upwards. Inside a panel, bars are the run series sorted ascending
    (x = run, y = POIS in [0, 1]) colored by the series class, and a blue
    marker shows the panel's (Cr, F) position on the global axes.

    Args:
        rows:      ResultRows of a single family
        title:     Figure title
        f_values:  F lattice; defaults to the F values present in rows
        cr_values: Cr lattice; defaults to the Cr values present in rows

    Raises:
        MissingCellsError: some (F, Cr) lattice cell has no successful run
    """
    rows = list(rows)
    cells = _cells(rows)
    f_values = sorted(set(f_values) if f_values is not None else {r.scale_factor for r in rows})
    cr_values = sorted(set(cr_values) if cr_values is not None else {r.crossover_rate for r in rows})
    missing = [(f, cr) for f, cr in product(f_values, cr_values) if not cells.get((f, cr))]
    if missing or not f_values:
        raise MissingCellsError(missing)

    cols, nrows = len(cr_values), len(f_values)
    grid_w = cols * PANEL_WIDTH + (cols - 1) * PANEL_GAP
    grid_h = nrows * PANEL_HEIGHT + (nrows - 1) * PANEL_GAP
    width = MARGIN_LEFT + grid_w + MARGIN_RIGHT
    height = MARGIN_TOP + grid_h + MARGIN_BOTTOM

    lines = _open_svg(width, height)
    lines.append(
        f'<text x="{MARGIN_LEFT + grid_w / 2:.2f}" y="32" text-anchor="middle" '
        f'font-size="18" {FONT}>{escape(title)}</text>'
    )

    for row_i, f in enumerate(f_values):
        top = MARGIN_TOP + (nrows - 1 - row_i) * (PANEL_HEIGHT + PANEL_GAP)
        lines.append(
            f'<text x="{MARGIN_LEFT - 10}" y="{top + PANEL_HEIGHT / 2 + 4:.2f}" text-anchor="end" '
            f'font-size="12" {FONT}>F={f:g}</text>'
        )
        for col_i, cr in enumerate(cr_values):
            left = MARGIN_LEFT + col_i * (PANEL_WIDTH + PANEL_GAP)
            lines.extend(_panel(left, top, f, cr, cells[(f, cr)]))

    axis_y = MARGIN_TOP + grid_h + 22
    for col_i, cr in enumerate(cr_values):
        cx = MARGIN_LEFT + col_i * (PANEL_WIDTH + PANEL_GAP) + PANEL_WIDTH / 2
        lines.append(
            f'<text x="{cx:.2f}" y="{axis_y:.2f}" text-anchor="middle" font-size="12" {FONT}>Cr={cr:g}</text>'
        )

    entries = [(c.value, CLASS_COLORS[c]) for c in ColorClass] + [("(Cr, F) marker", MARKER_COLOR)]
    _legend(lines, MARGIN_LEFT + grid_w + 24, MARGIN_TOP + 12, entries)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _panel(left: float, top: float, f: float, cr: float, values: list[float]) -> list[str]:
    color_class = classify(values)
    color = CLASS_COLORS[color_class]
    bottom = top + PANEL_HEIGHT
    bar_w = PANEL_WIDTH / len(values)

    out = [
        f'<g class="panel {color_class.value}" data-f="{f:g}" data-cr="{cr:g}">',
        f'<rect x="{left:.2f}" y="{top:.2f}" width="{PANEL_WIDTH}" height="{PANEL_HEIGHT}" '
        f'fill="none" stroke="#bbbbbb" stroke-width="1"/>',
    ]
    for i, value in enumerate(sorted(values)):
        h = value * PANEL_HEIGHT
        out.append(
            f'<rect class="bar" x="{left + i * bar_w:.2f}" y="{bottom - h:.2f}" '
            f'width="{bar_w:.2f}" height="{h:.2f}" fill="{color}"/>'
        )
    mx = left + (cr / CR_AXIS_MAX) * PANEL_WIDTH
    my = bottom - (f / F_AXIS_MAX) * PANEL_HEIGHT
    out.append(f'<circle class="marker" cx="{mx:.2f}" cy="{my:.2f}" r="3" fill="{MARKER_COLOR}"/>')
    out.append("</g>")
    return out


# ── p_max regions ─────────────────────────────────────────────────────────────

def render_pmax_svg(table: PmaxTable, title: str = "p_max(t, n)") -> str:
    """t on the horizontal axis, p_max on the vertical; one shaded region per n."""
    width, height = 900, 560
    left, right, top, bottom = 90, width - 170, 60, height - 70
    t_lo, t_hi = min(table.t_grid), max(table.t_grid)
    p_hi = float(table.values.max()) or 1.0
    t_span = (t_hi - t_lo) or 1.0

    def x_px(t: float) -> float:
        return left + (t - t_lo) / t_span * (right - left)

    def y_px(p: float) -> float:
        return bottom - p / p_hi * (bottom - top)

    lines = _open_svg(width, height)
    lines.append(
        f'<text x="{width / 2:.2f}" y="32" text-anchor="middle" font-size="18" {FONT}>{escape(title)}</text>'
    )
    lines.append(f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="#000000" stroke-width="1.5"/>')
    lines.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="#000000" stroke-width="1.5"/>')
    for i in range(6):
        p = p_hi * i / 5
        lines.append(
            f'<text x="{left - 8}" y="{y_px(p) + 4:.2f}" text-anchor="end" font-size="11" {FONT}>{p:.3g}</text>'
        )
    for t in table.t_grid:
        lines.append(
            f'<text x="{x_px(t):.2f}" y="{bottom + 20}" text-anchor="middle" font-size="11" {FONT}>{t:g}</text>'
        )
    lines.append(f'<text x="{(left + right) / 2:.2f}" y="{height - 24}" text-anchor="middle" font-size="13" {FONT}>t</text>')
    lines.append(
        f'<text x="24" y="{(top + bottom) / 2:.2f}" text-anchor="middle" font-size="13" {FONT} '
        f'transform="rotate(-90 24 {(top + bottom) / 2:.2f})">p_max</text>'
    )

    # widest region (smallest n) first so narrower ones stay visible
    order = sorted(range(len(table.n_grid)), key=lambda j: table.n_grid[j])
    entries = []
    for rank, j in enumerate(order):
        color = SERIES_COLORS[rank % len(SERIES_COLORS)]
        curve = [(x_px(t), y_px(p)) for t, p in zip(table.t_grid, table.values[j])]
        outline = curve + [(x_px(t_hi), y_px(0.0)), (x_px(t_lo), y_px(0.0))]
        points = " ".join(f"{x:.2f},{y:.2f}" for x, y in outline)
        lines.append(f'<polygon class="region" data-n="{table.n_grid[j]}" points="{points}" fill="{color}" fill-opacity="0.35" stroke="none"/>')
        curve_points = " ".join(f"{x:.2f},{y:.2f}" for x, y in curve)
        lines.append(f'<polyline points="{curve_points}" fill="none" stroke="{color}" stroke-width="2"/>')
        entries.append((f"n={table.n_grid[j]}", color))

    _legend(lines, right + 24, top + 12, entries)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(path, svg: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as handle:
        handle.write(svg)
    logger.info("wrote %s", path)
