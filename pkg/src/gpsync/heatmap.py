"""Standalone SVG heatmaps of sweep tables.

Byte-deterministic output: fixed layout, fixed float formatting, a built-in
color lookup table. One rect per grid cell, linear color scale with the
min/max annotated next to the color bar, flagged cells in neutral gray.
"""
from __future__ import annotations

import numpy as np

from .sweep import SweepTable

# anchors of the perceptually uniform LUT, equally spaced in [0, 1]
_VIRIDIS = np.array([
    (68, 1, 84), (71, 44, 122), (59, 81, 139), (44, 113, 142), (33, 144, 141),
    (39, 173, 129), (92, 200, 99), (170, 220, 50), (253, 231, 37)], dtype=float)
_GRAY = np.array([(0, 0, 0), (255, 255, 255)], dtype=float)
COLORMAPS = {"viridis": _VIRIDIS, "gray": _GRAY}

_FLAG_FILL = "#b4b4b4"
_CELL_W, _CELL_H = 44.0, 30.0
_ML, _MR, _MT, _MB = 76.0, 96.0, 34.0, 56.0


def _color(lut: np.ndarray, x: float) -> str:
    x = min(max(x, 0.0), 1.0)
    pos = x * (len(lut) - 1)
    i = min(int(pos), len(lut) - 2)
    frac = pos - i
    rgb = np.rint(lut[i] * (1.0 - frac) + lut[i + 1] * frac).astype(int)
    return "#%02x%02x%02x" % tuple(rgb)


def render_heatmap(table: SweepTable, path, colormap: str = "viridis") -> None:
    """Render the sweep grid to a standalone SVG file.

    Detuning runs along x, signal strength along y (increasing upward). A
    constant-valued table is rendered in the mid color with the degenerate
    scale annotated.
    """
    if colormap not in COLORMAPS:
        raise ValueError(f"unknown colormap {colormap!r}; choose from {sorted(COLORMAPS)}")
    lut = COLORMAPS[colormap]
    nd, nt = table.deltas.size, table.ts.size
    if table.values.shape != (nd, nt) or table.flags.shape != (nd, nt):
        raise ValueError("table is not rectangular: value grid does not match axes")

    finite = table.values[np.isfinite(table.values)]
    if finite.size == 0:
        vmin = vmax = 0.0
    else:
        vmin, vmax = float(finite.min()), float(finite.max())
    flat = vmin == vmax

    width = _ML + nd * _CELL_W + _MR
    height = _MT + nt * _CELL_H + _MB
    out = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
               f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">')
    out.append(f'<rect x="0" y="0" width="{width:.0f}" height="{height:.0f}" fill="#ffffff"/>')
    out.append(f'<text x="{_ML:.1f}" y="20" font-family="monospace" font-size="13">'
               f'{table.mode} sweep</text>')

    for i in range(nd):
        for j in range(nt):
            x = _ML + i * _CELL_W
            y = _MT + (nt - 1 - j) * _CELL_H
            if table.flags[i, j]:
                fill = _FLAG_FILL
            elif flat:
                fill = _color(lut, 0.5)
            else:
                fill = _color(lut, (table.values[i, j] - vmin) / (vmax - vmin))
            out.append(f'<rect x="{x:.1f}" y="{y:.1f}" width="{_CELL_W:.1f}" '
                       f'height="{_CELL_H:.1f}" fill="{fill}"/>')

    # axes
    x0, x1 = _ML, _ML + nd * _CELL_W
    y0, y1 = _MT + nt * _CELL_H, _MT
    out.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{y0 + 36:.1f}" font-family="monospace" '
               f'font-size="12" text-anchor="middle">Δ/γd</text>')
    out.append(f'<text x="{x0 - 56:.1f}" y="{(y0 + y1) / 2:.1f}" font-family="monospace" '
               f'font-size="12" writing-mode="tb">T/γd</text>')
    out.append(f'<text x="{x0:.1f}" y="{y0 + 16:.1f}" font-family="monospace" '
               f'font-size="10" text-anchor="middle">{table.deltas[0]:.4g}</text>')
    out.append(f'<text x="{x1:.1f}" y="{y0 + 16:.1f}" font-family="monospace" '
               f'font-size="10" text-anchor="middle">{table.deltas[-1]:.4g}</text>')
    out.append(f'<text x="{x0 - 8:.1f}" y="{y0:.1f}" font-family="monospace" '
               f'font-size="10" text-anchor="end">{table.ts[0]:.4g}</text>')
    out.append(f'<text x="{x0 - 8:.1f}" y="{y1 + 10:.1f}" font-family="monospace" '
               f'font-size="10" text-anchor="end">{table.ts[-1]:.4g}</text>')

    # color bar with min/max annotation
    bar_x = x1 + 18.0
    bar_h = nt * _CELL_H
    n_seg = 32
    for s in range(n_seg):
        frac = (s + 0.5) / n_seg
        y = _MT + bar_h * (1.0 - (s + 1) / n_seg)
        out.append(f'<rect x="{bar_x:.1f}" y="{y:.1f}" width="14.0" '
                   f'height="{bar_h / n_seg:.2f}" fill="{_color(lut, frac)}"/>')
    vmax_label = f"{vmax:.6g}" + (" (flat)" if flat else "")
    out.append(f'<text x="{bar_x + 18:.1f}" y="{_MT + 10:.1f}" font-family="monospace" '
               f'font-size="10">{vmax_label}</text>')
    out.append(f'<text x="{bar_x + 18:.1f}" y="{_MT + bar_h:.1f}" font-family="monospace" '
               f'font-size="10">{vmin:.6g}</text>')
    out.append("</svg>")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(out) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write heatmap SVG to {path}: {exc}") from exc
