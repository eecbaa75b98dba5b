"""Plain-text layout files: header ``n R``, then one ``x y`` line per circle.

Floats are serialized with repr, the shortest decimal form that round-trips,
so parse(render(layout)) reproduces the in-memory values bit for bit.
"""

from __future__ import annotations

import math
import os
from typing import Tuple, Union

import numpy as np


class LayoutParseError(ValueError):
    """A layout file is truncated, malformed, or non-numeric."""


def format_layout(centers, R: float) -> str:
    arr = np.asarray(centers, dtype=np.float64)
    lines = [f"{arr.shape[0]} {float(R)!r}"]
    for x, y in arr:
        lines.append(f"{float(x)!r} {float(y)!r}")
    return "\n".join(lines) + "\n"


def write_layout(path: Union[str, os.PathLike], centers, R: float) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_layout(centers, R))


def parse_layout(text: str) -> Tuple[np.ndarray, float]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise LayoutParseError("empty layout file")
    header = lines[0].split()
    if len(header) != 2:
        raise LayoutParseError(f"header must be 'n R', got {lines[0]!r}")
    try:
        n = int(header[0])
        R = float(header[1])
    except ValueError as exc:
        raise LayoutParseError(f"bad header {lines[0]!r}") from exc
    if n < 1:
        raise LayoutParseError(f"circle count must be positive, got {n}")
    if not math.isfinite(R):
        raise LayoutParseError("container radius must be finite")
    if len(lines) - 1 != n:
        raise LayoutParseError(f"expected {n} coordinate rows, found {len(lines) - 1}")
    centers = np.empty((n, 2), dtype=np.float64)
    for row, line in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != 2:
            raise LayoutParseError(f"row {row + 1} must be 'x y', got {line!r}")
        try:
            centers[row, 0] = float(parts[0])
            centers[row, 1] = float(parts[1])
        except ValueError as exc:
            raise LayoutParseError(f"non-numeric coordinate in row {row + 1}") from exc
    if not np.all(np.isfinite(centers)):
        raise LayoutParseError("layout coordinates must be finite")
    return centers, R


def read_layout(path: Union[str, os.PathLike]) -> Tuple[np.ndarray, float]:
    try:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    except OSError as exc:
        raise LayoutParseError(f"cannot read {path}: {exc}") from exc
    return parse_layout(text)
