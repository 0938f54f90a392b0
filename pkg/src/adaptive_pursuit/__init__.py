"""Adaptive-lookahead pure pursuit: lap simulation and offline lookahead label assignment."""

from .controller import (
    ControllerConfig,
    SteeringCommand,
    ackermann_steering,
    compute_command,
    curvature,
    pursuit_alpha,
    speed_for_lookahead,
)
from .optimizer import (
    DEFAULT_BETAS,
    DEFAULT_LOOKAHEADS,
    BaselineReport,
    LabelAssignment,
    LookaheadSet,
    SweepRow,
    assign_labels,
    best_row,
    compare_to_baseline,
    gamma_table,
    score_waypoint,
    smooth_labels,
    sweep_beta,
)
from .simulator import (
    Fixed,
    GammaOutcome,
    LapResult,
    LapStatus,
    PerWaypoint,
    SimConfig,
    evaluate_gamma,
    simulate_lap,
)
from .tracks import gen_track
from .trajectory import (
    Trajectory,
    Waypoint,
    build_trajectory,
    goal_at_arclength,
    lateral_deviation,
    nearest_point,
)
from .vehicle import VehicleState, step

__version__ = "0.1.0"
