"""Offline lookahead label assignment by a convex combination of exit speed and deviation."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .controller import ControllerConfig, speed_for_lookahead
from .errors import BetaOutOfRange, NoCompletingBaseline, PursuitError
from .simulator import (
    Fixed,
    GammaOutcome,
    LapResult,
    PerWaypoint,
    SimConfig,
    evaluate_gamma,
    on_path_state,
    simulate_lap,
)
from .trajectory import Trajectory

DEFAULT_LOOKAHEADS = (1.0, 1.5, 2.0)
DEFAULT_BETAS = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_MIN_RUN = 3


@dataclass(frozen=True)
class LookaheadSet:
    labels: tuple[float, ...] = DEFAULT_LOOKAHEADS

    def __init__(self, labels: Sequence[float] = DEFAULT_LOOKAHEADS):
        labels = tuple(float(v) for v in labels)
        if len(labels) < 2:
            raise ValueError("a lookahead set needs at least 2 labels")
        if any(not v > 0 for v in labels):
            raise ValueError("lookahead labels must be > 0")
        if any(b <= a for a, b in zip(labels, labels[1:])):
            raise ValueError("lookahead labels must be strictly increasing")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class LabelAssignment:
    """Per-waypoint label indices into ``labels``.

    ``beta`` and ``scores`` (N x K raw scores) are audit data and do not take
    part in equality.
    """

    label_index: tuple[int, ...]
    labels: tuple[float, ...]
    beta: float | None = field(default=None, compare=False)
    scores: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "label_index", tuple(int(i) for i in self.label_index))
        object.__setattr__(self, "labels", tuple(float(v) for v in self.labels))
        k = len(self.labels)
        if any(not 0 <= i < k for i in self.label_index):
            raise ValueError(f"label indices must lie in [0, {k})")

    def __len__(self) -> int:
        return len(self.label_index)

    @property
    def lookaheads(self) -> tuple[float, ...]:
        return tuple(self.labels[i] for i in self.label_index)

    def schedule(self) -> PerWaypoint:
        return PerWaypoint(self.lookaheads)


def _check_beta(beta: float) -> None:
    if not 0.0 <= beta <= 1.0:
        raise BetaOutOfRange(f"beta must lie in [0, 1], got {beta}")


def _normalize(col: np.ndarray) -> np.ndarray:
    lo, hi = col.min(), col.max()
    if hi == lo:  # all equal: the column carries no preference
        return np.zeros_like(col)
    return (col - lo) / (hi - lo)


def score_waypoint(outcomes: Sequence[GammaOutcome], beta: float) -> tuple[np.ndarray, int]:
    """Score K candidate outcomes; returns ``(scores, best_index)``.

    Both columns are min-max normalized over the candidates, then
    ``score = beta * v_norm - (1 - beta) * delta_norm``. The highest score
    wins; ties go to the lowest index (shortest lookahead).
    """
    _check_beta(beta)
    if len(outcomes) < 2:
        raise ValueError("need at least 2 outcomes to score")
    v = _normalize(np.array([o.v_exit for o in outcomes], dtype=float))
    d = _normalize(np.array([o.delta for o in outcomes], dtype=float))
    scores = beta * v - (1.0 - beta) * d
    return scores, int(np.argmax(scores))


def _gamma_row(args) -> list[GammaOutcome]:
    traj, i, labels, cfg, sim = args
    return [
        evaluate_gamma(traj, i, l, on_path_state(traj, i, speed_for_lookahead(l, cfg)), cfg, sim)
        for l in labels
    ]


def _pool_map(fn, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(a) for a in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def gamma_table(
    traj: Trajectory,
    lset: LookaheadSet,
    cfg: ControllerConfig,
    sim: SimConfig,
    workers: int = 1,
) -> list[list[GammaOutcome]]:
    """Outcomes for every (waypoint, label) pair, from on-path entry states.

    Entry at waypoint i is the waypoint position with its tangent heading and
    the label's own commanded speed, so rows do not depend on each other.
    """
    sim.check_against(traj)
    items = [(traj, i, lset.labels, cfg, sim) for i in range(traj.n)]
    return _pool_map(_gamma_row, items, workers)


def assign_from_table(
    table: Sequence[Sequence[GammaOutcome]], lset: LookaheadSet, beta: float
) -> LabelAssignment:
    _check_beta(beta)
    scores = np.zeros((len(table), len(lset)))
    best = []
    for i, row in enumerate(table):
        s, b = score_waypoint(row, beta)
        scores[i] = s
        best.append(b)
    return LabelAssignment(tuple(best), lset.labels, beta=beta, scores=scores)


def assign_labels(
    traj: Trajectory,
    lset: LookaheadSet,
    beta: float,
    cfg: ControllerConfig,
    sim: SimConfig,
    workers: int = 1,
) -> LabelAssignment:
    """Unsmoothed per-waypoint argmax assignment for one beta."""
    _check_beta(beta)
    return assign_from_table(gamma_table(traj, lset, cfg, sim, workers), lset, beta)


def _runs(idx: list[int]) -> list[list[int]]:
    """Maximal cyclic runs as ``[start, length, label]``, first run starting at a boundary."""
    n = len(idx)
    starts = [i for i in range(n) if idx[i] != idx[i - 1]]
    if not starts:
        return [[0, n, idx[0]]]
    runs = []
    for a, b in zip(starts, starts[1:] + [starts[0] + n]):
        runs.append([a, b - a, idx[a]])
    return runs


def smooth_labels(a: LabelAssignment, min_run: int = DEFAULT_MIN_RUN) -> LabelAssignment:
    """Absorb cyclic runs shorter than ``min_run`` into a neighbouring run.

    The shortest short run (lowest start on ties) is relabelled to the
    smaller of its two neighbours' labels, runs are re-merged, and this
    repeats until no short run remains or a single run covers the loop.
    """
    if min_run < 1:
        raise ValueError("min_run must be >= 1")
    idx = list(a.label_index)
    n = len(idx)
    while n:
        runs = _runs(idx)
        if len(runs) == 1:
            break
        short = [r for r in runs if r[1] < min_run]
        if not short:
            break
        k = runs.index(min(short, key=lambda r: (r[1], r[0])))
        prev_label = runs[k - 1][2]
        next_label = runs[(k + 1) % len(runs)][2]
        new_label = min(prev_label, next_label)
        start, length, _ = runs[k]
        for j in range(start, start + length):
            idx[j % n] = new_label
    return LabelAssignment(tuple(idx), a.labels, beta=a.beta, scores=a.scores)


@dataclass(frozen=True)
class SweepRow:
    beta: float
    assignment: LabelAssignment
    lap: LapResult


def _sweep_row(args) -> SweepRow:
    traj, table, lset, beta, cfg, sim, min_run = args
    raw = assign_from_table(table, lset, beta)
    smoothed = smooth_labels(raw, min_run)
    return SweepRow(beta, smoothed, simulate_lap(traj, smoothed.schedule(), cfg, sim))


def sweep_beta(
    traj: Trajectory,
    lset: LookaheadSet,
    betas: Sequence[float],
    cfg: ControllerConfig,
    sim: SimConfig,
    min_run: int = DEFAULT_MIN_RUN,
    workers: int = 1,
) -> list[SweepRow]:
    """Assign, smooth and race one lap per beta; rows come back in ``betas`` order.

    The gamma table does not depend on beta, so it is computed once and
    shared by every row.
    """
    betas = [float(b) for b in betas]
    for b in betas:
        _check_beta(b)
    table = gamma_table(traj, lset, cfg, sim, workers)
    items = [(traj, table, lset, b, cfg, sim, min_run) for b in betas]
    return _pool_map(_sweep_row, items, workers)


def best_row(rows: Sequence[SweepRow]) -> SweepRow:
    """Fastest completed row (DNF counts as +inf); earliest row wins ties."""
    if not rows:
        raise ValueError("no sweep rows")
    return min(rows, key=lambda r: r.lap.ranking_time)


def _pct_lower_is_better(baseline: float, adaptive: float) -> float:
    if baseline == 0:
        return 0.0
    return (baseline - adaptive) / baseline * 100.0


@dataclass(frozen=True)
class BaselineReport:
    adaptive: LapResult
    fixed: dict[float, LapResult]
    baseline_lookahead: float
    improvement_pct: dict[str, float]

    def as_dict(self) -> dict:
        return {
            "baseline_lookahead_m": self.baseline_lookahead,
            "adaptive": self.adaptive.metrics(),
            "fixed": {repr(l): r.metrics() for l, r in self.fixed.items()},
            "improvement_pct": dict(self.improvement_pct),
        }


def compare_to_baseline(
    traj: Trajectory,
    lset: LookaheadSet,
    best: SweepRow | LabelAssignment,
    cfg: ControllerConfig,
    sim: SimConfig,
) -> BaselineReport:
    """Race every fixed label and the adaptive schedule.

    Improvements are percentages against the fastest completing fixed run,
    signed so that positive means the adaptive schedule is better: lap time
    and both deviations are lower-is-better, average speed higher-is-better.
    """
    if isinstance(best, SweepRow):
        adaptive = best.lap
    else:
        adaptive = simulate_lap(traj, best.schedule(), cfg, sim)
    fixed = {l: simulate_lap(traj, Fixed(l), cfg, sim) for l in lset.labels}
    completing = [(r.lap_time, l) for l, r in fixed.items() if r.completed]
    if not completing:
        raise NoCompletingBaseline("every fixed-lookahead baseline failed to finish")
    _, base_l = min(completing)
    base = fixed[base_l]
    if adaptive.completed:
        imp = {
            "lap_time": _pct_lower_is_better(base.lap_time, adaptive.lap_time),
            "avg_speed": -_pct_lower_is_better(base.avg_speed, adaptive.avg_speed),
            "total_deviation": _pct_lower_is_better(base.total_deviation, adaptive.total_deviation),
            "max_deviation": _pct_lower_is_better(base.max_deviation, adaptive.max_deviation),
        }
    else:
        imp = {"lap_time": -math.inf, "avg_speed": -math.inf,
               "total_deviation": -math.inf, "max_deviation": -math.inf}
    return BaselineReport(adaptive, fixed, base_l, imp)


__all__ = [
    "DEFAULT_BETAS",
    "DEFAULT_LOOKAHEADS",
    "DEFAULT_MIN_RUN",
    "BaselineReport",
    "LabelAssignment",
    "LookaheadSet",
    "PursuitError",
    "SweepRow",
    "assign_from_table",
    "assign_labels",
    "best_row",
    "compare_to_baseline",
    "gamma_table",
    "score_waypoint",
    "smooth_labels",
    "sweep_beta",
]
