"""CSV/JSON/SVG readers and writers plus the flat key-value run config.

Floats are written with ``repr`` (shortest round-trip form), so every CSV
round-trips exactly and identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

from .controller import ControllerConfig
from .errors import ParseError, ScheduleSizeMismatch
from .optimizer import (
    DEFAULT_BETAS,
    DEFAULT_MIN_RUN,
    LabelAssignment,
    LookaheadSet,
    SweepRow,
)
from .simulator import LapResult, SimConfig, TraceRow
from .trajectory import Trajectory, build_trajectory
from .vehicle import VehicleState

TRACK_HEADER = ("x", "y")
LABELS_HEADER = ("waypoint_index", "lookahead_m", "label_index")
TRACE_HEADER = ("t", "x", "y", "heading", "v", "steering", "lookahead")
SWEEP_HEADER = (
    "beta",
    "status",
    "lap_time_s",
    "avg_speed_mps",
    "total_deviation_ms",
    "max_deviation_m",
)
METRIC_KEYS = SWEEP_HEADER[1:]


def fmt(v: float) -> str:
    return repr(float(v))


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _read_csv(path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    """Header and ``(line_number, cells)`` for each non-blank data row."""
    text = Path(path).read_text()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty file", line=1)
    header = [c.strip() for c in rows[0]]
    body = [(n, [c.strip() for c in r]) for n, r in enumerate(rows[1:], start=2) if any(c.strip() for c in r)]
    return header, body


def _float(cell: str, line: int, name: str) -> float:
    try:
        v = float(cell)
    except ValueError:
        raise ParseError(f"{name}: not a number: {cell!r}", line=line) from None
    if not math.isfinite(v):
        raise ParseError(f"{name}: not finite: {cell!r}", line=line)
    return v


def _int(cell: str, line: int, name: str) -> int:
    try:
        return int(cell)
    except ValueError:
        raise ParseError(f"{name}: not an integer: {cell!r}", line=line) from None


# -- tracks -----------------------------------------------------------------


def load_track_csv(path) -> Trajectory:
    """Read ``x,y[,heading]`` rows; a heading column is accepted and ignored."""
    header, body = _read_csv(path)
    if header[:2] != list(TRACK_HEADER) or len(header) > 3 or (
        len(header) == 3 and header[2] != "heading"
    ):
        raise ParseError(f"expected header x,y[,heading], got {','.join(header)}", line=1)
    pts = []
    for line, cells in body:
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(cells)}", line=line)
        pts.append((_float(cells[0], line, "x"), _float(cells[1], line, "y")))
        if len(cells) == 3:
            _float(cells[2], line, "heading")
    return build_trajectory(pts)


def track_csv(traj: Trajectory) -> str:
    return _csv_text(
        ("x", "y", "heading"),
        ((fmt(w.x), fmt(w.y), fmt(w.heading)) for w in traj.waypoints),
    )


def save_track_csv(path, traj: Trajectory) -> None:
    Path(path).write_text(track_csv(traj))


# -- labels -----------------------------------------------------------------


def labels_csv(traj: Trajectory, assignment: LabelAssignment) -> str:
    if len(assignment) != traj.n:
        raise ScheduleSizeMismatch(f"assignment has {len(assignment)} entries for {traj.n} waypoints")
    return _csv_text(
        LABELS_HEADER,
        (
            (str(i), fmt(assignment.labels[k]), str(k))
            for i, k in enumerate(assignment.label_index)
        ),
    )


def save_labels_csv(path, traj: Trajectory, assignment: LabelAssignment) -> None:
    Path(path).write_text(labels_csv(traj, assignment))


def load_labels_csv(path, traj: Trajectory, lset: LookaheadSet | None = None) -> LabelAssignment:
    """Read a labels file for ``traj``.

    With ``lset`` the label alphabet is taken from it and every row must
    agree with it. Without, the alphabet is inferred from the rows and must
    cover indices ``0..max`` with one lookahead per index.
    """
    header, body = _read_csv(path)
    if header != list(LABELS_HEADER):
        raise ParseError(f"expected header {','.join(LABELS_HEADER)}", line=1)
    if len(body) != traj.n:
        raise ScheduleSizeMismatch(f"labels file has {len(body)} rows for {traj.n} waypoints")
    alphabet: dict[int, float] = {}
    index = [0] * traj.n
    seen = [False] * traj.n
    for line, cells in body:
        if len(cells) != 3:
            raise ParseError(f"expected 3 columns, got {len(cells)}", line=line)
        wp = _int(cells[0], line, "waypoint_index")
        look = _float(cells[1], line, "lookahead_m")
        k = _int(cells[2], line, "label_index")
        if not 0 <= wp < traj.n or seen[wp]:
            raise ParseError(f"waypoint_index {wp} out of range or repeated", line=line)
        if k < 0:
            raise ParseError(f"label_index {k} is negative", line=line)
        if lset is not None:
            if k >= len(lset.labels) or lset.labels[k] != look:
                raise ParseError(f"label {k} -> {look} does not match the lookahead set", line=line)
        elif alphabet.setdefault(k, look) != look:
            raise ParseError(f"label_index {k} maps to two lookaheads", line=line)
        seen[wp] = True
        index[wp] = k
    if lset is not None:
        labels = lset.labels
    else:
        if sorted(alphabet) != list(range(len(alphabet))):
            raise ParseError("label indices must be contiguous from 0 without a lookahead set")
        labels = tuple(alphabet[k] for k in range(len(alphabet)))
        if any(b <= a for a, b in zip(labels, labels[1:])):
            raise ParseError("lookaheads must increase with label_index")
    return LabelAssignment(tuple(index), labels)


# -- traces and reports -----------------------------------------------------


def save_trace_csv(path, lap: LapResult) -> None:
    Path(path).write_text(trace_csv(lap))


def trace_csv(lap: LapResult) -> str:
    return _csv_text(
        TRACE_HEADER,
        (
            (
                fmt(r.t),
                fmt(r.state.x),
                fmt(r.state.y),
                fmt(r.state.heading),
                fmt(r.state.v),
                fmt(r.steering),
                fmt(r.lookahead),
            )
            for r in lap.trace
        ),
    )


def load_trace_csv(path) -> tuple[TraceRow, ...]:
    header, body = _read_csv(path)
    if header != list(TRACE_HEADER):
        raise ParseError(f"expected header {','.join(TRACE_HEADER)}", line=1)
    out = []
    for line, cells in body:
        if len(cells) != len(TRACE_HEADER):
            raise ParseError(f"expected {len(TRACE_HEADER)} columns", line=line)
        t, x, y, h, v, s, l = (_float(c, line, n) for c, n in zip(cells, TRACE_HEADER))
        out.append(TraceRow(t, VehicleState(x, y, h, v), s, l))
    return tuple(out)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    return v


def dumps(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, allow_nan=False) + "\n"


def metrics_json(lap: LapResult) -> str:
    return dumps(lap.metrics())


def sweep_records(rows: Sequence[SweepRow]) -> list[dict]:
    return [{"beta": r.beta, **r.lap.metrics()} for r in rows]


def sweep_report_csv(rows: Sequence[SweepRow]) -> str:
    return _csv_text(
        SWEEP_HEADER,
        (
            [fmt(rec["beta"]), rec["status"]] + [fmt(rec[k]) for k in METRIC_KEYS[1:]]
            for rec in sweep_records(rows)
        ),
    )


def sweep_report_json(rows: Sequence[SweepRow]) -> str:
    return json.dumps([_json_safe(r) for r in sweep_records(rows)], indent=2) + "\n"


def write_sweep_report(path, rows: Sequence[SweepRow]) -> None:
    """CSV unless the path ends in ``.json``."""
    text = sweep_report_json(rows) if str(path).endswith(".json") else sweep_report_csv(rows)
    Path(path).write_text(text)


# -- SVG --------------------------------------------------------------------

# red, yellow, green first: short, medium, long
PALETTE = (
    "#d62728",
    "#f2c80f",
    "#2ca02c",
    "#1f77b4",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#17becf",
    "#7f7f7f",
)


def label_svg(traj: Trajectory, assignment: LabelAssignment, width_px: int = 800) -> str:
    if len(assignment) != traj.n:
        raise ScheduleSizeMismatch(f"assignment has {len(assignment)} entries for {traj.n} waypoints")
    if len(assignment.labels) > len(PALETTE):
        raise ValueError(f"at most {len(PALETTE)} labels can be drawn")
    xs = [w.x for w in traj.waypoints]
    ys = [w.y for w in traj.waypoints]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    margin = 40.0
    scale = (width_px - 2 * margin) / span
    height_px = int(math.ceil((max(ys) - min(ys)) * scale + 2 * margin)) + 20 * len(assignment.labels)

    def px(x: float, y: float) -> str:
        # flip y so the map frame reads upright
        return f"{margin + (x - min(xs)) * scale:.3f},{margin + (max(ys) - y) * scale:.3f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" height="{height_px}" '
        f'viewBox="0 0 {width_px} {height_px}">',
        '<rect width="100%" height="100%" fill="white"/>',
        '<g fill="none" stroke-width="4" stroke-linecap="round">',
    ]
    n = traj.n
    for i, k in enumerate(assignment.label_index):
        a, b = traj.waypoints[i], traj.waypoints[(i + 1) % n]
        out.append(f'<polyline points="{px(a.x, a.y)} {px(b.x, b.y)}" stroke="{PALETTE[k]}"/>')
    out.append("</g>")
    y0 = (max(ys) - min(ys)) * scale + 2 * margin
    out.append('<g font-family="sans-serif" font-size="14">')
    for k, look in enumerate(assignment.labels):
        y = y0 + 20 * k
        out.append(f'<rect x="{margin:.3f}" y="{y - 10:.3f}" width="20" height="10" fill="{PALETTE[k]}"/>')
        out.append(f'<text x="{margin + 28:.3f}" y="{y:.3f}">lookahead {look:g} m</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_label_svg(path, traj: Trajectory, assignment: LabelAssignment) -> None:
    Path(path).write_text(label_svg(traj, assignment))


# -- run config -------------------------------------------------------------

_CONTROLLER_KEYS = tuple(f.name for f in fields(ControllerConfig))
_SIM_KEYS = tuple(f.name for f in fields(SimConfig))
_INT_KEYS = {"gamma_horizon_H", "start_index", "min_run"}


@dataclass(frozen=True)
class RunConfig:
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    sim: SimConfig = field(default_factory=SimConfig)
    lookaheads: LookaheadSet = field(default_factory=LookaheadSet)
    betas: tuple[float, ...] = DEFAULT_BETAS
    min_run: int = DEFAULT_MIN_RUN

    def __post_init__(self) -> None:
        for b in self.betas:
            if not 0.0 <= b <= 1.0:
                raise ValueError(f"beta {b} outside [0, 1]")
        if self.min_run < 1:
            raise ValueError("min_run must be >= 1")

    def to_text(self) -> str:
        lines = []
        for k in _CONTROLLER_KEYS:
            lines.append(f"{k} = {_fmt_value(getattr(self.controller, k))}")
        for k in _SIM_KEYS:
            lines.append(f"{k} = {_fmt_value(getattr(self.sim, k))}")
        lines.append("lookaheads = " + ",".join(fmt(v) for v in self.lookaheads.labels))
        lines.append("betas = " + ",".join(fmt(v) for v in self.betas))
        lines.append(f"min_run = {self.min_run}")
        return "\n".join(lines) + "\n"

    def with_values(self, values: dict[str, str]) -> "RunConfig":
        """Apply string overrides keyed by config name."""
        ctrl, sim, top = {}, {}, {}
        for key, raw in values.items():
            try:
                if key in _CONTROLLER_KEYS:
                    ctrl[key] = float(raw)
                elif key in _SIM_KEYS:
                    sim[key] = int(raw) if key in _INT_KEYS else float(raw)
                elif key == "lookaheads":
                    top[key] = LookaheadSet(parse_float_list(raw))
                elif key == "betas":
                    top[key] = tuple(parse_float_list(raw))
                elif key == "min_run":
                    top[key] = int(raw)
                else:
                    raise ParseError(f"unknown config key {key!r}")
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(f"{key}: {exc}") from None
        return replace(
            self,
            controller=replace(self.controller, **ctrl),
            sim=replace(self.sim, **sim),
            **top,
        )


def _fmt_value(v) -> str:
    return str(v) if isinstance(v, int) else fmt(v)


def parse_float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def parse_config_text(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key = value, got {raw!r}", line=n)
        key, value = (p.strip() for p in line.split("=", 1))
        if not key:
            raise ParseError("missing key", line=n)
        values[key] = value
    return values


def load_run_config(path=None, base: RunConfig | None = None) -> RunConfig:
    cfg = base or RunConfig()
    if path is None:
        return cfg
    return cfg.with_values(parse_config_text(Path(path).read_text()))
