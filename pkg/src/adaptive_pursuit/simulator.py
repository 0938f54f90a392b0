"""Closed-loop lap simulation and the per-waypoint evaluation outcome."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

from .controller import ControllerConfig, command_from_projection, speed_for_lookahead
from .errors import IndexOutOfRange, ScheduleSizeMismatch
from .trajectory import Projection, Trajectory, nearest_point, signed_arc_delta, arc_distance
from .vehicle import VehicleState, step

# fraction of the loop that must be covered before a start-line crossing counts
LAP_PROGRESS_FRACTION = 0.99

# gamma reports deviation rounded to this many decimals (1 nm); below that the
# projection is float noise, and noise must not decide a label
DELTA_DECIMALS = 9


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.02
    max_sim_time: float = 300.0
    dnf_deviation: float = 1.0
    gamma_horizon_H: int = 20
    start_index: int = 0

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if not self.max_sim_time > 0:
            raise ValueError("max_sim_time must be > 0")
        if not self.dnf_deviation > 0:
            raise ValueError("dnf_deviation must be > 0")
        if self.gamma_horizon_H < 1:
            raise ValueError("gamma_horizon_H must be >= 1")
        if self.start_index < 0:
            raise ValueError("start_index must be >= 0")

    def check_against(self, traj: Trajectory) -> None:
        if self.gamma_horizon_H >= traj.n:
            raise ValueError(
                f"gamma_horizon_H={self.gamma_horizon_H} must be < N={traj.n}"
            )
        if self.start_index >= traj.n:
            raise IndexOutOfRange(f"start_index {self.start_index} outside [0, {traj.n})")


@dataclass(frozen=True)
class Fixed:
    lookahead: float


@dataclass(frozen=True)
class PerWaypoint:
    lookaheads: tuple[float, ...]

    def __init__(self, lookaheads: Sequence[float]):
        object.__setattr__(self, "lookaheads", tuple(float(v) for v in lookaheads))


LookaheadSchedule = Union[Fixed, PerWaypoint]


class LapStatus(str, enum.Enum):
    COMPLETED = "Completed"
    DNF_DEVIATION = "DNF_Deviation"
    DNF_TIMEOUT = "DNF_Timeout"

    def __str__(self) -> str:
        return self.value


class TraceRow(NamedTuple):
    t: float
    state: VehicleState
    steering: float
    lookahead: float


@dataclass(frozen=True)
class LapResult:
    status: LapStatus
    lap_time: float
    avg_speed: float
    total_deviation: float
    max_deviation: float
    trace: tuple[TraceRow, ...]

    @property
    def completed(self) -> bool:
        return self.status is LapStatus.COMPLETED

    @property
    def ranking_time(self) -> float:
        """Lap time with any DNF mapped to +inf."""
        return self.lap_time if self.completed else math.inf

    @property
    def path_length(self) -> float:
        rows = self.trace
        return math.fsum(
            math.hypot(b.state.x - a.state.x, b.state.y - a.state.y)
            for a, b in zip(rows, rows[1:])
        )

    def metrics(self) -> dict:
        return {
            "status": str(self.status),
            "lap_time_s": self.lap_time,
            "avg_speed_mps": self.avg_speed,
            "total_deviation_ms": self.total_deviation,
            "max_deviation_m": self.max_deviation,
        }


@dataclass(frozen=True)
class GammaOutcome:
    v_exit: float
    delta: float

    def __post_init__(self) -> None:
        if self.v_exit < 0 or self.delta < 0:
            raise ValueError("v_exit and delta must be >= 0")


def on_path_state(traj: Trajectory, i: int, v: float) -> VehicleState:
    """Vehicle sitting on waypoint ``i`` with that waypoint's heading."""
    if not 0 <= i < traj.n:
        raise IndexOutOfRange(f"waypoint index {i} outside [0, {traj.n})")
    w = traj.waypoints[i]
    return VehicleState(w.x, w.y, w.heading, v)


def _lookahead_lookup(traj: Trajectory, schedule: LookaheadSchedule):
    if isinstance(schedule, Fixed):
        l_d = float(schedule.lookahead)
        return lambda proj: l_d
    if isinstance(schedule, PerWaypoint):
        labels = schedule.lookaheads
        if len(labels) != traj.n:
            raise ScheduleSizeMismatch(
                f"schedule has {len(labels)} entries for {traj.n} waypoints"
            )
        n = traj.n

        def lookup(proj: Projection) -> float:
            i = proj.segment_index if proj.fraction <= 0.5 else (proj.segment_index + 1) % n
            return labels[i]

        return lookup
    raise TypeError(f"unsupported schedule {schedule!r}")


def simulate_lap(
    traj: Trajectory,
    schedule: LookaheadSchedule,
    cfg: ControllerConfig,
    sim: SimConfig,
) -> LapResult:
    """Drive one lap from ``sim.start_index`` under the given lookahead schedule.

    The active lookahead each tick is the fixed value or the label of the
    waypoint nearest the rear axle. A lap completes once at least 99% of the
    loop has been covered and the line through the start point,
    perpendicular to the start heading, is crossed forwards.
    """
    sim.check_against(traj)
    lookup = _lookahead_lookup(traj, schedule)
    state = on_path_state(traj, sim.start_index, cfg.v_min)
    x0, y0 = state.x, state.y
    tx, ty = math.cos(state.heading), math.sin(state.heading)
    dt = sim.dt
    max_ticks = int(math.ceil(sim.max_sim_time / dt - 1e-9))
    lap_needed = LAP_PROGRESS_FRACTION * traj.total_length

    proj = nearest_point(traj, (state.x, state.y))
    rows: list[TraceRow] = []
    progress = 0.0
    total_dev = 0.0
    max_dev = proj.distance
    path_len = 0.0
    dot_prev = 0.0
    status = LapStatus.DNF_TIMEOUT
    tick = 0
    steering = 0.0
    l_d = lookup(proj)
    while tick < max_ticks:
        l_d = lookup(proj)
        cmd = command_from_projection(state.pose, proj, traj, l_d, cfg)
        steering = cmd.steering
        rows.append(TraceRow(tick * dt, state, steering, l_d))
        new = step(state, steering, cmd.speed, dt, cfg)
        tick += 1
        path_len += math.hypot(new.x - state.x, new.y - state.y)
        new_proj = nearest_point(traj, (new.x, new.y))
        progress += signed_arc_delta(traj, proj.arc_pos, new_proj.arc_pos)
        dev = new_proj.distance
        total_dev += dev * dt
        max_dev = max(max_dev, dev)
        state, proj = new, new_proj
        if dev > sim.dnf_deviation:
            status = LapStatus.DNF_DEVIATION
            break
        dot = (new.x - x0) * tx + (new.y - y0) * ty
        if progress >= lap_needed and dot_prev < 0.0 <= dot:
            status = LapStatus.COMPLETED
            break
        dot_prev = dot
    rows.append(TraceRow(tick * dt, state, steering, l_d))
    elapsed = tick * dt
    return LapResult(
        status=status,
        lap_time=elapsed,
        avg_speed=path_len / elapsed if elapsed > 0 else 0.0,
        total_deviation=total_dev,
        max_deviation=max_dev,
        trace=tuple(rows),
    )


def evaluate_gamma(
    traj: Trajectory,
    i: int,
    l_j: float,
    entry: VehicleState,
    cfg: ControllerConfig,
    sim: SimConfig,
) -> GammaOutcome:
    """Exit speed and worst deviation when holding lookahead ``l_j`` from ``entry``
    until the vehicle passes waypoint ``(i + H) % N``.

    ``delta`` is rounded to ``DELTA_DECIMALS`` places. A run that exceeds
    the DNF deviation or the time budget scores the worst case: ``v_exit = 0`` and ``delta = dnf_deviation``.
    """
    if not 0 <= i < traj.n:
        raise IndexOutOfRange(f"waypoint index {i} outside [0, {traj.n})")
    sim.check_against(traj)
    fail = GammaOutcome(0.0, sim.dnf_deviation)
    target = traj.cum_arclength[(i + sim.gamma_horizon_H) % traj.n]
    proj = nearest_point(traj, (entry.x, entry.y))
    if proj.distance > sim.dnf_deviation:
        return fail
    needed = arc_distance(traj, proj.arc_pos, target)
    if needed == 0.0:
        needed = traj.total_length
    speed = speed_for_lookahead(l_j, cfg)
    dt = sim.dt
    max_ticks = int(math.ceil(sim.max_sim_time / dt - 1e-9))
    state = entry
    progress = 0.0
    max_dev = proj.distance
    for _ in range(max_ticks):
        cmd = command_from_projection(state.pose, proj, traj, l_j, cfg)
        state = step(state, cmd.steering, speed, dt, cfg)
        new_proj = nearest_point(traj, (state.x, state.y))
        progress += signed_arc_delta(traj, proj.arc_pos, new_proj.arc_pos)
        proj = new_proj
        if proj.distance > sim.dnf_deviation:
            return fail
        max_dev = max(max_dev, proj.distance)
        if progress >= needed:
            return GammaOutcome(state.v, round(max_dev, DELTA_DECIMALS))
    return fail
