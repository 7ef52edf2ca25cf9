"""Chart renderings: tab-separated table, text grid, SVG.

Charts are drawn in Adams layout: x is the stem t - s, y the filtration
s.  The table format `s<TAB>t<TAB>dim` sorted by (s, t) is the canonical
diffable output; the text grid and the SVG must plot exactly the same
(s, t, dim) triples.
"""

from __future__ import annotations

from steenrodext.resolution import ExtChart


def chart_table(chart: ExtChart) -> str:
    return chart.table()


def chart_grid(chart: ExtChart, s_max: int | None = None, t_max: int | None = None) -> str:
    """ASCII Adams chart; one digit per class count, stems across."""
    s_hi = chart.s_max if s_max is None else s_max
    t_hi = chart.t_max if t_max is None else t_max
    stem_hi = t_hi
    lines = []
    for s in range(s_hi, -1, -1):
        cells = []
        for stem in range(stem_hi + 1):
            t = stem + s
            d = chart.get(s, t) if t <= t_hi else 0
            cells.append("." if d == 0 else (str(d) if d < 10 else "*"))
        lines.append(f"{s:3d} | " + " ".join(cells))
    lines.append("    +-" + "--" * (stem_hi + 1))
    axis = [" "] * (stem_hi + 1)
    for stem in range(0, stem_hi + 1, 5):
        label = str(stem)
        axis[stem] = label[0]
    lines.append("      " + " ".join(axis) + "   (stem)")
    return "\n".join(lines)


def chart_svg(chart: ExtChart, s_max: int | None = None, t_max: int | None = None) -> str:
    """Dot plot as standalone SVG; every dot carries data-s/data-t/data-dim."""
    s_hi = chart.s_max if s_max is None else s_max
    t_hi = chart.t_max if t_max is None else t_max
    cell = 18
    pad = 30
    width = pad * 2 + (t_hi + 1) * cell
    height = pad * 2 + (s_hi + 1) * cell
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for (s, t), d in sorted(chart.dims.items()):
        if s > s_hi or t > t_hi:
            continue
        stem = t - s
        if stem < 0:
            continue
        x = pad + stem * cell + cell // 2
        y = height - pad - s * cell - cell // 2
        parts.append(
            f'<circle cx="{x}" cy="{y}" r="4" fill="black" '
            f'data-s="{s}" data-t="{t}" data-dim="{d}"/>'
        )
        if d > 1:
            parts.append(
                f'<text x="{x + 6}" y="{y - 4}" font-size="9">{d}</text>'
            )
    parts.append(
        f'<text x="{pad}" y="{height - 8}" font-size="10">stem (t - s)</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts)


def svg_plotted_classes(svg: str) -> set[tuple[int, int, int]]:
    """(s, t, dim) triples plotted in an SVG produced by chart_svg."""
    import re

    out = set()
    for m in re.finditer(r'data-s="(\d+)" data-t="(\d+)" data-dim="(\d+)"', svg):
        out.add((int(m.group(1)), int(m.group(2)), int(m.group(3))))
    return out
