"""SVG rendering of a layout: the container circle plus one unit circle each."""

from __future__ import annotations

import os
from typing import Union

import numpy as np


def svg_document(centers, R: float) -> str:
    arr = np.asarray(centers, dtype=np.float64)
    half = 1.05 * R  # 5% padding around the container
    span = 2.0 * half
    stroke = max(R / 200.0, 0.01)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="720" height="720" '
        f'viewBox="{-half!r} {-half!r} {span!r} {span!r}">',
        f'  <circle cx="0" cy="0" r="{float(R)!r}" fill="none" stroke="#202020" '
        f'stroke-width="{stroke!r}"/>',
    ]
    for x, y in arr:
        lines.append(
            f'  <circle cx="{float(x)!r}" cy="{float(y)!r}" r="1" fill="#6699cc" '
            f'fill-opacity="0.6" stroke="#1f3d5c" stroke-width="{stroke!r}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_svg(centers, R: float, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(svg_document(centers, R))
