"""Sweep beta on a synthetic track and write labels, SVGs and a report.

    python scripts/run_beta_sweep.py --shape hairpin_circuit --out results/sweep
"""

import argparse
from pathlib import Path

from adaptive_pursuit import ControllerConfig, LookaheadSet, SimConfig, gen_track
from adaptive_pursuit import formats
from adaptive_pursuit.optimizer import DEFAULT_BETAS, best_row, sweep_beta


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shape", default="hairpin_circuit", choices=("circle", "oval", "hairpin_circuit"))
    ap.add_argument("--betas", default=",".join(map(str, DEFAULT_BETAS)))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/sweep")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    traj = gen_track(args.shape)
    lset = LookaheadSet()
    betas = formats.parse_float_list(args.betas)
    rows = sweep_beta(traj, lset, betas, ControllerConfig(), SimConfig(), workers=args.workers)

    formats.save_track_csv(out / "track.csv", traj)
    for r in rows:
        stem = f"beta_{r.beta:.2f}"
        formats.save_labels_csv(out / f"{stem}_labels.csv", traj, r.assignment)
        formats.emit_label_svg(out / f"{stem}.svg", traj, r.assignment)
    formats.write_sweep_report(out / "sweep.csv", rows)
    formats.write_sweep_report(out / "sweep.json", rows)

    print(f"{args.shape}: {traj.n} waypoints, {traj.total_length:.2f} m")
    print(f"{'beta':>5} {'status':>14} {'lap_s':>7} {'avg_mps':>8} {'max_dev':>8}")
    for r in rows:
        lap = r.lap
        print(f"{r.beta:5.2f} {lap.status.value:>14} {lap.lap_time:7.2f} "
              f"{lap.avg_speed:8.3f} {lap.max_deviation:8.3f}")
    best = best_row(rows)
    if best.lap.completed:
        print(f"best beta = {best.beta} ({best.lap.lap_time:.2f} s)")
    else:
        print("no beta completed a lap")
    print(f"wrote {out}/")


if __name__ == "__main__":
    main()
