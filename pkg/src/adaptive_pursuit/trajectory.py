"""Closed-loop reference trajectories and the geometric queries pure pursuit needs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DuplicateConsecutivePoints, LookaheadExceedsTrack, TooFewWaypoints

MIN_SEGMENT = 1e-6
TIE_TOL = 1e-12


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.remainder(a, 2.0 * math.pi)
    if w <= -math.pi:
        w += 2.0 * math.pi
    return w


@dataclass(frozen=True)
class Waypoint:
    x: float
    y: float
    heading: float


class Projection(NamedTuple):
    arc_pos: float
    point: tuple[float, float]
    segment_index: int
    distance: float
    fraction: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Immutable closed polyline. Segment ``i`` joins waypoint ``i`` to ``(i + 1) % N``."""

    waypoints: tuple[Waypoint, ...]
    cum_arclength: tuple[float, ...]
    total_length: float
    _xy: np.ndarray = field(repr=False)
    _seg: np.ndarray = field(repr=False)
    _seg_len: np.ndarray = field(repr=False)
    _cum: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.waypoints)

    def __len__(self) -> int:
        return len(self.waypoints)

    @property
    def xy(self) -> np.ndarray:
        return self._xy.copy()

    @property
    def headings(self) -> np.ndarray:
        return np.array([w.heading for w in self.waypoints])

    def segment_length(self, i: int) -> float:
        return float(self._seg_len[i])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        return self.waypoints == other.waypoints

    def __hash__(self) -> int:
        return hash(self.waypoints)

    # pickling support: numpy fields are rebuilt from the waypoints
    def __reduce__(self):
        return (build_trajectory, ([(w.x, w.y) for w in self.waypoints],))


def build_trajectory(points: Iterable[Sequence[float]]) -> Trajectory:
    """Build a closed trajectory from ``(x, y)`` pairs.

    Any extra columns (e.g. a supplied heading) are ignored; headings are
    recomputed as the direction to the next waypoint.
    """
    pts = [(float(p[0]), float(p[1])) for p in points]
    n = len(pts)
    if n < 3:
        raise TooFewWaypoints(f"need at least 3 waypoints, got {n}")
    xy = np.array(pts, dtype=float)
    seg = np.roll(xy, -1, axis=0) - xy
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    for i in range(n):
        if not seg_len[i] >= MIN_SEGMENT:
            raise DuplicateConsecutivePoints(i)

    waypoints = tuple(
        Waypoint(pts[i][0], pts[i][1], wrap_angle(math.atan2(seg[i, 1], seg[i, 0])))
        for i in range(n)
    )
    cum = np.zeros(n)
    # sequential sum keeps cum[i] bit-reproducible
    acc = 0.0
    for i in range(1, n):
        acc += float(seg_len[i - 1])
        cum[i] = acc
    total = acc + float(seg_len[n - 1])
    return Trajectory(
        waypoints=waypoints,
        cum_arclength=tuple(float(c) for c in cum),
        total_length=total,
        _xy=xy,
        _seg=seg,
        _seg_len=seg_len,
        _cum=cum,
    )


def _project(traj: Trajectory, x: float, y: float) -> Projection:
    xy, seg, seg_len = traj._xy, traj._seg, traj._seg_len
    dx = x - xy[:, 0]
    dy = y - xy[:, 1]
    t = (dx * seg[:, 0] + dy * seg[:, 1]) / (seg_len * seg_len)
    np.clip(t, 0.0, 1.0, out=t)
    px = xy[:, 0] + t * seg[:, 0]
    py = xy[:, 1] + t * seg[:, 1]
    d = np.hypot(x - px, y - py)
    dmin = d.min()
    i = int(np.flatnonzero(d <= dmin + TIE_TOL)[0])
    ti = float(t[i])
    arc = float(traj._cum[i]) + ti * float(seg_len[i])
    if arc >= traj.total_length:
        arc -= traj.total_length
    return Projection(arc, (float(px[i]), float(py[i])), i, float(d[i]), ti)


def nearest_point(traj: Trajectory, p: Sequence[float]) -> Projection:
    """Closest point on the polyline to ``p``.

    Returns ``(arc_pos, point, segment_index, distance, fraction)`` where
    ``fraction`` is the position along the segment in [0, 1]. Equidistant
    segments resolve to the lowest index.
    """
    return _project(traj, float(p[0]), float(p[1]))


def point_at_arclength(traj: Trajectory, s: float) -> tuple[float, float]:
    s = s % traj.total_length
    i = int(np.searchsorted(traj._cum, s, side="right")) - 1
    t = (s - float(traj._cum[i])) / float(traj._seg_len[i])
    x0, y0 = traj._xy[i]
    return (float(x0 + t * traj._seg[i, 0]), float(y0 + t * traj._seg[i, 1]))


def goal_at_arclength(traj: Trajectory, arc_pos: float, l_d: float) -> tuple[float, float]:
    """Point ``l_d`` metres further along the loop from ``arc_pos``."""
    if l_d >= traj.total_length:
        raise LookaheadExceedsTrack(
            f"lookahead {l_d} m is not shorter than the track ({traj.total_length} m)"
        )
    return point_at_arclength(traj, arc_pos + l_d)


def lateral_deviation(traj: Trajectory, p: Sequence[float]) -> float:
    return _project(traj, float(p[0]), float(p[1])).distance


def nearest_waypoint(traj: Trajectory, p: Sequence[float]) -> int:
    proj = _project(traj, float(p[0]), float(p[1]))
    if proj.fraction <= 0.5:
        return proj.segment_index
    return (proj.segment_index + 1) % traj.n


def arc_distance(traj: Trajectory, s_from: float, s_to: float) -> float:
    """Forward distance along the loop from ``s_from`` to ``s_to``, in [0, total)."""
    return (s_to - s_from) % traj.total_length


def signed_arc_delta(traj: Trajectory, s_from: float, s_to: float) -> float:
    """Shortest signed arc displacement, in [-total/2, total/2)."""
    half = 0.5 * traj.total_length
    return (s_to - s_from + half) % traj.total_length - half
