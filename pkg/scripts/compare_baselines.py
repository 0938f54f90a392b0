"""Best-beta adaptive schedule against every fixed lookahead.

    python scripts/compare_baselines.py --shape hairpin_circuit --out results/compare
"""

import argparse
from pathlib import Path

from adaptive_pursuit import ControllerConfig, Fixed, LookaheadSet, SimConfig, gen_track, simulate_lap
from adaptive_pursuit import formats
from adaptive_pursuit.optimizer import DEFAULT_BETAS, best_row, compare_to_baseline, sweep_beta


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shape", default="hairpin_circuit", choices=("circle", "oval", "hairpin_circuit"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/compare")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg, sim, lset = ControllerConfig(), SimConfig(), LookaheadSet()
    traj = gen_track(args.shape)
    best = best_row(sweep_beta(traj, lset, DEFAULT_BETAS, cfg, sim, workers=args.workers))
    report = compare_to_baseline(traj, lset, best, cfg, sim)

    (out / "report.json").write_text(formats.dumps({"beta": best.beta, **report.as_dict()}))
    formats.save_trace_csv(out / "adaptive_trace.csv", best.lap)
    for l in lset.labels:
        formats.save_trace_csv(out / f"fixed_{l}_trace.csv", simulate_lap(traj, Fixed(l), cfg, sim))
    formats.emit_label_svg(out / "adaptive_labels.svg", traj, best.assignment)

    print(f"{'schedule':>16} {'status':>14} {'lap_s':>7} {'avg_mps':>8} {'dev_ms':>8}")
    named = [(f"fixed {l}", r) for l, r in report.fixed.items()]
    named.append((f"adaptive b={best.beta}", report.adaptive))
    for name, lap in named:
        print(f"{name:>16} {lap.status.value:>14} {lap.lap_time:7.2f} "
              f"{lap.avg_speed:8.3f} {lap.total_deviation:8.3f}")
    print(f"vs fixed {report.baseline_lookahead}: " + ", ".join(
        f"{k} {v:+.1f}%" for k, v in report.improvement_pct.items()))


if __name__ == "__main__":
    main()
