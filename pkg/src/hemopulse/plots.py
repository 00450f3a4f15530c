"""Minimal static SVG output for the exploratory artifacts.

Hand-rolled markup keeps the files dependency-free and byte-deterministic
for identical inputs.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _svg(width: int, height: int, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def scree_svg(rho: np.ndarray, cumulative: np.ndarray, path: str | Path) -> None:
    """Bar chart of per-component variance share with a cumulative line."""
    width, height = 640, 400
    left, right, top, bottom = 60, 20, 20, 40
    plot_w, plot_h = width - left - right, height - top - bottom
    d = len(rho)
    bar_w = plot_w / d
    body = [
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
    ]
    for i, r in enumerate(rho):
        h = r * plot_h
        x = left + i * bar_w
        body.append(
            f'<rect x="{x:.2f}" y="{top + plot_h - h:.2f}" width="{bar_w * 0.8:.2f}" '
            f'height="{h:.2f}" fill="#4878cf"/>'
        )
    points = " ".join(
        f"{left + (i + 0.4) * bar_w:.2f},{top + plot_h - c * plot_h:.2f}"
        for i, c in enumerate(cumulative)
    )
    body.append(f'<polyline points="{points}" fill="none" stroke="#d65f5f" stroke-width="2"/>')
    for tick in (0.0, 0.25, 0.5, 0.75, 0.95, 1.0):
        y = top + plot_h - tick * plot_h
        body.append(f'<line x1="{left - 4}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        body.append(f'<text x="{left - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{tick:g}</text>')
    body.append(
        f'<text x="{left + plot_w / 2:.0f}" y="{height - 10}" font-size="12" '
        f'text-anchor="middle">principal component</text>'
    )
    Path(path).write_text(_svg(width, height, body), encoding="utf-8")


def _diverging_color(v: float) -> str:
    """Blue (-1) through white (0) to red (+1)."""
    v = max(-1.0, min(1.0, v))
    if v >= 0:
        g = b = int(round(255 * (1.0 - v)))
        return f"rgb(255,{g},{b})"
    r = g = int(round(255 * (1.0 + v)))
    return f"rgb({r},{g},255)"


def heatmap_svg(matrix: np.ndarray, labels: list[str], path: str | Path) -> None:
    """Correlation heatmap with one square per matrix entry."""
    d = matrix.shape[0]
    cell = 16
    margin = 70
    size = margin + d * cell + 10
    body = [f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>']
    for i in range(d):
        for j in range(d):
            body.append(
                f'<rect x="{margin + j * cell}" y="{margin + i * cell}" width="{cell}" '
                f'height="{cell}" fill="{_diverging_color(float(matrix[i, j]))}"/>'
            )
    for i, name in enumerate(labels):
        y = margin + i * cell + cell - 4
        body.append(f'<text x="{margin - 6}" y="{y}" font-size="9" text-anchor="end">{name}</text>')
        x = margin + i * cell + cell / 2
        body.append(
            f'<text x="{x:.0f}" y="{margin - 6}" font-size="9" text-anchor="start" '
            f'transform="rotate(-60 {x:.0f} {margin - 6})">{name}</text>'
        )
    Path(path).write_text(_svg(size, size, body), encoding="utf-8")
