"""Synthetic closed-loop tracks: circle, oval and hairpin circuit."""

from __future__ import annotations

import math

from .errors import InvalidDimensions
from .trajectory import Trajectory, build_trajectory

SHAPES = ("oval", "hairpin_circuit", "circle")

DEFAULT_PARAMS = {
    "circle": {"radius": 3.0, "spacing": 0.1},
    "oval": {"straight": 10.0, "radius": 2.0, "spacing": 0.1},
    # width None means 2 * radius (semicircular turns)
    "hairpin_circuit": {"straight": 12.0, "radius": 0.5, "width": None, "spacing": 0.1},
}


def _positive(**dims: float) -> None:
    for name, value in dims.items():
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise InvalidDimensions(f"{name} must be a positive number, got {value!r}")


def circle_points(radius: float, spacing: float) -> list[tuple[float, float]]:
    _positive(radius=radius, spacing=spacing)
    n = max(3, round(2.0 * math.pi * radius / spacing))
    return [
        (radius * math.cos(2.0 * math.pi * k / n), radius * math.sin(2.0 * math.pi * k / n))
        for k in range(n)
    ]


def stadium_points(straight: float, radius: float, spacing: float) -> list[tuple[float, float]]:
    """Counter-clockwise stadium starting at the left end of the lower straight.

    Lower straight runs along y = 0 from x = 0 to x = ``straight``; the turns
    are semicircles of ``radius`` centred at (straight, radius) and (0, radius).
    """
    _positive(straight=straight, radius=radius, spacing=spacing)
    n_str = max(1, math.ceil(straight / spacing))
    n_arc = max(2, math.ceil(math.pi * radius / spacing))
    pts: list[tuple[float, float]] = []
    for k in range(n_str):
        pts.append((straight * k / n_str, 0.0))
    for k in range(n_arc):
        a = -math.pi / 2 + math.pi * k / n_arc
        pts.append((straight + radius * math.cos(a), radius + radius * math.sin(a)))
    for k in range(n_str):
        pts.append((straight - straight * k / n_str, 2.0 * radius))
    for k in range(n_arc):
        a = math.pi / 2 + math.pi * k / n_arc
        pts.append((radius * math.cos(a), radius + radius * math.sin(a)))
    return pts


def _arc(cx, cy, r, a0, a1, spacing):
    n = max(2, math.ceil(abs(a1 - a0) * r / spacing))
    return [
        (cx + r * math.cos(a0 + (a1 - a0) * k / n), cy + r * math.sin(a0 + (a1 - a0) * k / n))
        for k in range(n)
    ]


def _line(x0, y0, x1, y1, spacing):
    n = max(1, math.ceil(math.hypot(x1 - x0, y1 - y0) / spacing))
    return [(x0 + (x1 - x0) * k / n, y0 + (y1 - y0) * k / n) for k in range(n)]


def hairpin_points(
    straight: float, radius: float, width: float, spacing: float
) -> list[tuple[float, float]]:
    """Two parallel straights ``width`` apart, each end closed by a 180 degree turn.

    Each turn is a quarter arc of ``radius``, a connector of length
    ``width - 2 * radius`` and a second quarter arc; with ``width == 2 * radius``
    the track reduces to a stadium.
    """
    _positive(straight=straight, radius=radius, spacing=spacing)
    _positive(width=width)
    if width < 2.0 * radius:
        raise InvalidDimensions(f"width {width} must be >= 2 * radius ({2.0 * radius})")
    s, r, w = straight, radius, width
    q = math.pi / 2
    pts = _line(0.0, 0.0, s, 0.0, spacing)
    pts += _arc(s, r, r, -q, 0.0, spacing)
    if w > 2.0 * r:
        pts += _line(s + r, r, s + r, w - r, spacing)
    pts += _arc(s, w - r, r, 0.0, q, spacing)
    pts += _line(s, w, 0.0, w, spacing)
    pts += _arc(0.0, w - r, r, q, 2 * q, spacing)
    if w > 2.0 * r:
        pts += _line(-r, w - r, -r, r, spacing)
    pts += _arc(0.0, r, r, 2 * q, 3 * q, spacing)
    return pts


def gen_track(shape: str, **params: float) -> Trajectory:
    """Generate a named track; unspecified dimensions take ``DEFAULT_PARAMS``."""
    if shape not in DEFAULT_PARAMS:
        raise InvalidDimensions(f"unknown shape {shape!r}; expected one of {SHAPES}")
    merged = dict(DEFAULT_PARAMS[shape])
    unknown = set(params) - set(merged)
    if unknown:
        raise InvalidDimensions(f"unknown parameters for {shape}: {sorted(unknown)}")
    merged.update(params)
    if shape == "hairpin_circuit" and merged["width"] is None:
        merged["width"] = 2.0 * merged["radius"]
    if shape == "circle":
        return build_trajectory(circle_points(merged["radius"], merged["spacing"]))
    if shape == "oval":
        return build_trajectory(
            stadium_points(merged["straight"], merged["radius"], merged["spacing"])
        )
    return build_trajectory(
        hairpin_points(merged["straight"], merged["radius"], merged["width"], merged["spacing"])
    )
