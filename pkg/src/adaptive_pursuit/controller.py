"""Ackermann-adjusted pure pursuit.

The pose is the rear-axle reference point. The goal sits ``l_d`` metres of
arc ahead of the pose's projection onto the reference, and the steering
angle is the front-wheel angle that puts the rear axle on the circular arc
through the goal, tangent to the current heading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateGoal, NonpositiveLookahead, NonpositiveWheelbase
from .trajectory import Projection, Trajectory, goal_at_arclength, nearest_point, wrap_angle


@dataclass(frozen=True)
class ControllerConfig:
    wheelbase_L: float = 0.325
    max_steer: float = 0.4189
    v_min: float = 1.5
    v_max: float = 4.0
    accel_limit: float = 3.0
    l_min: float = 1.0
    l_max: float = 2.0

    def __post_init__(self) -> None:
        if not self.wheelbase_L > 0:
            raise ValueError("wheelbase_L must be > 0")
        if not self.max_steer > 0:
            raise ValueError("max_steer must be > 0")
        if not self.v_min > 0:
            raise ValueError("v_min must be > 0")
        if not self.v_max >= self.v_min:
            raise ValueError("v_max must be >= v_min")
        if not self.accel_limit > 0:
            raise ValueError("accel_limit must be > 0")
        if not self.l_max > self.l_min > 0:
            raise ValueError("need l_max > l_min > 0")


@dataclass(frozen=True)
class SteeringCommand:
    steering: float
    speed: float
    goal: tuple[float, float]
    alpha: float
    curvature: float


def pursuit_alpha(pose: Sequence[float], goal: Sequence[float]) -> float:
    """Bearing of ``goal`` relative to the pose heading, wrapped to (-pi, pi]."""
    x1, y1, phi = pose[0], pose[1], pose[2]
    dx, dy = goal[0] - x1, goal[1] - y1
    if math.hypot(dx, dy) < 1e-9:
        raise DegenerateGoal("goal coincides with the pose")
    return wrap_angle(math.atan2(dy, dx) - phi)


def curvature(alpha: float, l_d: float) -> float:
    if not l_d > 0:
        raise NonpositiveLookahead(f"lookahead must be > 0, got {l_d}")
    return 2.0 * math.sin(alpha) / l_d


def ackermann_steering(alpha: float, l_d: float, L: float) -> float:
    """Unclamped front-wheel angle ``atan(2 L sin(alpha) / l_d)``."""
    if not l_d > 0:
        raise NonpositiveLookahead(f"lookahead must be > 0, got {l_d}")
    if not L > 0:
        raise NonpositiveWheelbase(f"wheelbase must be > 0, got {L}")
    return math.atan(2.0 * L * math.sin(alpha) / l_d)


def speed_for_lookahead(l_d: float, cfg: ControllerConfig) -> float:
    """Linear lookahead-to-speed law, saturating at ``v_min`` and ``v_max``."""
    frac = (l_d - cfg.l_min) / (cfg.l_max - cfg.l_min)
    frac = min(1.0, max(0.0, frac))
    return cfg.v_min + frac * (cfg.v_max - cfg.v_min)


def clamp_steering(theta: float, cfg: ControllerConfig) -> float:
    return min(cfg.max_steer, max(-cfg.max_steer, theta))


def compute_command(
    pose: Sequence[float], traj: Trajectory, l_d: float, cfg: ControllerConfig
) -> SteeringCommand:
    return command_from_projection(pose, nearest_point(traj, pose), traj, l_d, cfg)


def command_from_projection(
    pose: Sequence[float],
    proj: Projection,
    traj: Trajectory,
    l_d: float,
    cfg: ControllerConfig,
) -> SteeringCommand:
    # proj must be nearest_point(traj, pose); lets the simulator reuse it
    goal = goal_at_arclength(traj, proj.arc_pos, l_d)
    alpha = pursuit_alpha(pose, goal)
    # the pursuit arc subtends the straight-line chord to the goal, which is
    # shorter than l_d of arc whenever the reference bends
    chord = math.hypot(goal[0] - pose[0], goal[1] - pose[1])
    k = curvature(alpha, chord)
    theta = clamp_steering(ackermann_steering(alpha, chord, cfg.wheelbase_L), cfg)
    return SteeringCommand(
        steering=theta,
        speed=speed_for_lookahead(l_d, cfg),
        goal=goal,
        alpha=alpha,
        curvature=k,
    )
