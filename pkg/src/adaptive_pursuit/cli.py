"""Command-line entry point: ``adaptive-pursuit <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .errors import PursuitError
from .optimizer import (
    assign_labels,
    best_row,
    compare_to_baseline,
    smooth_labels,
    sweep_beta,
)
from .simulator import Fixed, simulate_lap
from .tracks import gen_track

EXIT_OK, EXIT_USAGE, EXIT_DNF = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _add_common(p: argparse.ArgumentParser, track: bool = True) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config value (repeatable)")
    p.add_argument("--dump-config", action="store_true",
                   help="print the resolved configuration and exit")
    if track:
        p.add_argument("--track", help="track CSV (x,y[,heading])")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adaptive-pursuit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen-track", help="write a synthetic track CSV")
    g.add_argument("shape", choices=("oval", "hairpin_circuit", "circle"))
    g.add_argument("--radius", type=float)
    g.add_argument("--straight", type=float)
    g.add_argument("--width", type=float)
    g.add_argument("--spacing", type=float)
    g.add_argument("--out", help="output CSV (default: stdout)")

    s = sub.add_parser("simulate", help="run one lap and print metrics JSON")
    _add_common(s)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--lookahead", type=float, help="fixed lookahead in metres")
    mode.add_argument("--labels", help="per-waypoint labels CSV")
    s.add_argument("--out", help="also write metrics JSON here")
    s.add_argument("--trace", help="write the state trace CSV here")
    s.add_argument("--fail-on-dnf", action="store_true")

    a = sub.add_parser("assign", help="assign lookahead labels for one beta")
    _add_common(a)
    a.add_argument("--beta", type=float, required=True)
    a.add_argument("--lookaheads", help="comma-separated label set, e.g. 1.0,1.5,2.0")
    a.add_argument("--min-run", type=int, help="smoothing run length (1 disables)")
    a.add_argument("--labels-out", help="labels CSV (default: stdout)")
    a.add_argument("--workers", type=int, default=1)

    w = sub.add_parser("sweep", help="assign and race each beta")
    _add_common(w)
    w.add_argument("--betas", help="comma-separated betas")
    w.add_argument("--lookaheads")
    w.add_argument("--min-run", type=int)
    w.add_argument("--report", help="report path (.csv or .json); CSV also printed")
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--fail-on-dnf", action="store_true")

    c = sub.add_parser("compare", help="adaptive schedule vs every fixed lookahead")
    _add_common(c)
    c.add_argument("--labels", help="labels CSV; omitted means sweep and take the best beta")
    c.add_argument("--betas")
    c.add_argument("--lookaheads")
    c.add_argument("--report", help="write the JSON report here")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--fail-on-dnf", action="store_true")

    p = sub.add_parser("plot", help="draw the label assignment as SVG")
    _add_common(p)
    p.add_argument("--labels", required=True)
    p.add_argument("--svg-out", required=True)
    return parser


def _resolve_config(args) -> formats.RunConfig:
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        overrides[k.strip()] = v.strip()
    for flag, key in (("lookaheads", "lookaheads"), ("betas", "betas"), ("min_run", "min_run")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = str(value)
    if getattr(args, "beta", None) is not None:
        overrides["betas"] = str(args.beta)
    cfg = formats.load_run_config(args.config)
    return cfg.with_values(overrides) if overrides else cfg


def _track(args):
    if not args.track:
        raise UsageError("--track is required")
    return formats.load_track_csv(args.track)


def _emit(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_gen_track(args) -> int:
    params = {
        k: getattr(args, k)
        for k in ("radius", "straight", "width", "spacing")
        if getattr(args, k) is not None
    }
    traj = gen_track(args.shape, **params)
    _emit(formats.track_csv(traj), args.out)
    return EXIT_OK


def _cmd_simulate(args, rc: formats.RunConfig) -> int:
    if args.lookahead is None and args.labels is None:
        raise UsageError("one of --lookahead or --labels is required")
    traj = _track(args)
    if args.labels:
        schedule = formats.load_labels_csv(args.labels, traj).schedule()
    else:
        schedule = Fixed(args.lookahead)
    lap = simulate_lap(traj, schedule, rc.controller, rc.sim)
    text = formats.metrics_json(lap)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
    if args.trace:
        formats.save_trace_csv(args.trace, lap)
    return EXIT_DNF if args.fail_on_dnf and not lap.completed else EXIT_OK


def _cmd_assign(args, rc: formats.RunConfig) -> int:
    traj = _track(args)
    raw = assign_labels(traj, rc.lookaheads, args.beta, rc.controller, rc.sim, args.workers)
    a = smooth_labels(raw, rc.min_run)
    _emit(formats.labels_csv(traj, a), args.labels_out)
    return EXIT_OK


def _cmd_sweep(args, rc: formats.RunConfig) -> int:
    traj = _track(args)
    rows = sweep_beta(traj, rc.lookaheads, rc.betas, rc.controller, rc.sim, rc.min_run, args.workers)
    sys.stdout.write(formats.sweep_report_csv(rows))
    if args.report:
        formats.write_sweep_report(args.report, rows)
    if args.fail_on_dnf and any(not r.lap.completed for r in rows):
        return EXIT_DNF
    return EXIT_OK


def _cmd_compare(args, rc: formats.RunConfig) -> int:
    traj = _track(args)
    if args.labels:
        adaptive = formats.load_labels_csv(args.labels, traj)
        report = compare_to_baseline(traj, rc.lookaheads, adaptive, rc.controller, rc.sim)
        payload = report.as_dict()
    else:
        rows = sweep_beta(
            traj, rc.lookaheads, rc.betas, rc.controller, rc.sim, rc.min_run, args.workers
        )
        best = best_row(rows)
        report = compare_to_baseline(traj, rc.lookaheads, best, rc.controller, rc.sim)
        payload = {"beta": best.beta, **report.as_dict()}
    text = formats.dumps(payload)
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text)
    return EXIT_DNF if args.fail_on_dnf and not report.adaptive.completed else EXIT_OK


def _cmd_plot(args, rc: formats.RunConfig) -> int:
    traj = _track(args)
    a = formats.load_labels_csv(args.labels, traj)
    formats.emit_label_svg(args.svg_out, traj, a)
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "assign": _cmd_assign,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
    "plot": _cmd_plot,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "gen-track":
            return _cmd_gen_track(args)
        rc = _resolve_config(args)
        if args.dump_config:
            sys.stdout.write(rc.to_text())
            return EXIT_OK
        return _COMMANDS[args.command](args, rc)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (PursuitError, ValueError, OSError) as exc:
        print(f"adaptive-pursuit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
