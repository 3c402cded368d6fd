"""Deterministic heatmap rendering for pairwise agreement matrices.

Values in [-1, 1] map linearly onto a diverging ramp (-1 -> #2166ac,
0 -> #f7f7f7, +1 -> #b2182b); absent cells render gray #bdbdbd with an
en dash. Rendering is a pure function of the matrix, so output bytes are
golden-testable.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .workers import PairwiseMatrix

NEGATIVE_RGB = (0x21, 0x66, 0xAC)
MIDPOINT_RGB = (0xF7, 0xF7, 0xF7)
POSITIVE_RGB = (0xB2, 0x18, 0x2B)
ABSENT_COLOR = "#bdbdbd"
ABSENT_TEXT = "–"

CELL_PX = 64
LABEL_GUTTER_PX = 96

ANSI_RESET = "\x1b[0m"


def _lerp(low: tuple[int, int, int], high: tuple[int, int, int], t: float):
    return tuple(round(a + (b - a) * t) for a, b in zip(low, high))


def value_rgb(value: float) -> tuple[int, int, int]:
    v = max(-1.0, min(1.0, value))
    if v < 0.0:
        return _lerp(NEGATIVE_RGB, MIDPOINT_RGB, v + 1.0)
    return _lerp(MIDPOINT_RGB, POSITIVE_RGB, v)


def value_color(value: float) -> str:
    r, g, b = value_rgb(value)
    return f"#{r:02x}{g:02x}{b:02x}"


def render_svg(matrix: PairwiseMatrix) -> str:
    """n x n grid of 64-px cells with axis labels and 2-decimal cell text."""
    n = len(matrix.annotators)
    width = LABEL_GUTTER_PX + n * CELL_PX
    height = LABEL_GUTTER_PX + n * CELL_PX
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="13">'
    ]
    title = f"pairwise {matrix.coefficient}"
    if matrix.doc_class is not None:
        title += f" ({matrix.doc_class})"
    parts.append(f"<title>{escape(title)}</title>")
    for j, name in enumerate(matrix.annotators):
        x = LABEL_GUTTER_PX + j * CELL_PX + CELL_PX // 2
        parts.append(
            f'<text x="{x}" y="{LABEL_GUTTER_PX - 10}" text-anchor="middle">'
            f"{escape(name)}</text>"
        )
    for i, name in enumerate(matrix.annotators):
        y = LABEL_GUTTER_PX + i * CELL_PX + CELL_PX // 2 + 5
        parts.append(
            f'<text x="{LABEL_GUTTER_PX - 10}" y="{y}" text-anchor="end">'
            f"{escape(name)}</text>"
        )
    for i in range(n):
        for j in range(n):
            value = matrix.values[i][j]
            x = LABEL_GUTTER_PX + j * CELL_PX
            y = LABEL_GUTTER_PX + i * CELL_PX
            if value is None:
                fill, text, text_fill = ABSENT_COLOR, ABSENT_TEXT, "#000000"
            else:
                rgb = value_rgb(value)
                fill = value_color(value)
                text = f"{value:.2f}"
                luminance = 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2]
                text_fill = "#000000" if luminance >= 140 else "#ffffff"
            parts.append(
                f'<rect x="{x}" y="{y}" width="{CELL_PX}" height="{CELL_PX}" '
                f'fill="{fill}" stroke="#ffffff"/>'
            )
            parts.append(
                f'<text x="{x + CELL_PX // 2}" y="{y + CELL_PX // 2 + 5}" '
                f'text-anchor="middle" fill="{text_fill}">{text}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _ansi_cell(text: str, value: float | None) -> str:
    if value is None:
        return text
    r, g, b = value_rgb(value)
    luminance = 0.299 * r + 0.587 * g + 0.114 * b
    fg = "30" if luminance >= 140 else "97"
    return f"\x1b[{fg};48;2;{r};{g};{b}m{text}{ANSI_RESET}"


def render_text(matrix: PairwiseMatrix, color: bool = False) -> str:
    """Aligned table with 2-decimal cells; ANSI background colors optional."""
    names = matrix.annotators
    width = max(5, *(len(n) for n in names))
    header = " " * width + "".join(f"  {n:>{width}}" for n in names)
    lines = [header]
    for i, name in enumerate(names):
        cells = []
        for j in range(len(names)):
            value = matrix.values[i][j]
            text = ABSENT_TEXT if value is None else f"{value:.2f}"
            padded = f"{text:>{width}}"
            cells.append("  " + (_ansi_cell(padded, value) if color else padded))
        lines.append(f"{name:<{width}}" + "".join(cells))
    return "\n".join(lines) + "\n"


def emit_heatmap(matrix: PairwiseMatrix, format: str, color: bool = False) -> bytes:
    if format == "svg":
        return render_svg(matrix).encode("utf-8")
    if format == "text":
        return render_text(matrix, color=color).encode("utf-8")
    raise ValueError(f"unknown heatmap format {format!r} (expected 'svg' or 'text')")
