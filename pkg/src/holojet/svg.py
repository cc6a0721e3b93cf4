"""Deterministic SVG rendering of wave fronts.

The drawing is assembled purely from the front data: fixed header, six
decimal places everywhere, no timestamps or generated ids.  Equal fronts
therefore produce byte-identical files, which makes the output safe to
diff and to pin in regression tests.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .front import MultiSection

__all__ = ["SvgStyle", "emit_svg"]


@dataclass(frozen=True)
class SvgStyle:
    """Canvas geometry and colors; defaults give a readable 4:3 plot."""

    width: int = 640
    height: int = 480
    margin: float = 24.0
    stroke: str = "#1f4e8c"
    stroke_width: float = 1.2
    cusp_color: str = "#c0392b"
    cusp_radius: float = 2.4
    membrane_fill: str = "#f0c948"
    membrane_opacity: float = 0.25


def _fmt(v: float) -> str:
    s = f"{float(v):.6f}"
    # normalize the sign of a rounded-away zero so equal geometry cannot
    # differ by a stray "-0.000000"
    return "0.000000" if s == "-0.000000" else s


def _data_window(front: MultiSection) -> tuple[float, float, float, float]:
    x = front.x
    y = front.y[:, 0]
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = float(y.min()), float(y.max())
    scale = max(abs(x0), abs(x1), abs(y0), abs(y1), 1.0)
    if x1 - x0 < 1e-12 * scale:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 - y0 < 1e-12 * scale:
        y0, y1 = y0 - 0.5, y1 + 0.5
    return x0, x1, y0, y1


def _merge_bands(bands: list[tuple[float, float]]) -> list[tuple[float, float]]:
    if not bands:
        return []
    bands.sort()
    out = [bands[0]]
    for lo, hi in bands[1:]:
        if lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def emit_svg(front: MultiSection, style: SvgStyle = SvgStyle()) -> str:
    """Render a wave front: one path per branch, cusp dots, membrane bands.

    Branches are split at the cusp parameters, so every fold shows up as a
    junction of two path elements; membranes shade the x-band their
    parameter interval sweeps.  The returned string ends with a newline.
    """
    if front.t.size < 2:
        raise ValueError("front has no segments to draw")
    st = style
    x0, x1, y0, y1 = _data_window(front)
    sx = (st.width - 2.0 * st.margin) / (x1 - x0)
    sy = (st.height - 2.0 * st.margin) / (y1 - y0)

    def px(x: float) -> float:
        return st.margin + (x - x0) * sx

    def py(y: float) -> float:
        return st.height - st.margin - (y - y0) * sy

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{st.width}" '
        f'height="{st.height}" viewBox="0 0 {st.width} {st.height}">',
    ]

    bands = []
    for lo, hi in front.membranes:
        sel = (front.t >= lo) & (front.t <= hi)
        xs = [np.interp(lo, front.t, front.x), np.interp(hi, front.t, front.x)]
        if sel.any():
            xs.extend([front.x[sel].min(), front.x[sel].max()])
        bands.append((float(min(xs)), float(max(xs))))
    bands = _merge_bands(bands)
    if bands:
        lines.append(f'<g fill="{st.membrane_fill}" '
                     f'fill-opacity="{_fmt(st.membrane_opacity)}">')
        top = _fmt(st.margin)
        h = _fmt(st.height - 2.0 * st.margin)
        for lo, hi in bands:
            w = max(px(hi) - px(lo), 0.5)
            lines.append(f'<rect x="{_fmt(px(lo))}" y="{top}" '
                         f'width="{_fmt(w)}" height="{h}"/>')
        lines.append("</g>")

    lines.append(f'<g fill="none" stroke="{st.stroke}" '
                 f'stroke-width="{_fmt(st.stroke_width)}" '
                 'stroke-linejoin="round">')
    for _, bx, by in front.branches():
        parts = [f"M{_fmt(px(bx[0]))},{_fmt(py(by[0, 0]))}"]
        parts.extend(f"L{_fmt(px(u))},{_fmt(py(v))}"
                     for u, v in zip(bx[1:], by[1:, 0]))
        lines.append(f'<path d="{"".join(parts)}"/>')
    lines.append("</g>")

    if front.cusps:
        lines.append(f'<g fill="{st.cusp_color}">')
        for c in front.cusps:
            cx = float(np.interp(c, front.t, front.x))
            cy = float(np.interp(c, front.t, front.y[:, 0]))
            lines.append(f'<circle cx="{_fmt(px(cx))}" cy="{_fmt(py(cy))}" '
                         f'r="{_fmt(st.cusp_radius)}"/>')
        lines.append("</g>")

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
