"""Kinematic bicycle model about the rear axle, forward-Euler integrated."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .controller import ControllerConfig
from .errors import NonpositiveTimestep
from .trajectory import wrap_angle


@dataclass(frozen=True)
class VehicleState:
    x: float
    y: float
    heading: float
    v: float

    def __post_init__(self) -> None:
        if self.v < 0:
            raise ValueError(f"speed must be >= 0, got {self.v}")

    @property
    def pose(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.heading)


def step(
    state: VehicleState, steering: float, v_cmd: float, dt: float, cfg: ControllerConfig
) -> VehicleState:
    """Advance one control period.

    Speed moves toward ``v_cmd`` by at most ``accel_limit * dt``; position
    uses the updated speed and the pre-step heading.
    """
    if not dt > 0:
        raise NonpositiveTimestep(f"dt must be > 0, got {dt}")
    dv_max = cfg.accel_limit * dt
    dv = v_cmd - state.v
    if abs(dv) <= dv_max:
        v = v_cmd  # land exactly; state.v + dv can round past v_cmd
    else:
        v = state.v + math.copysign(dv_max, dv)
    v = max(v, 0.0)
    phi = state.heading
    x = state.x + v * math.cos(phi) * dt
    y = state.y + v * math.sin(phi) * dt
    heading = wrap_angle(phi + (v / cfg.wheelbase_L) * math.tan(steering) * dt)
    return VehicleState(x, y, heading, v)
