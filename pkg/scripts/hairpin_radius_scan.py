"""Scan hairpin turn radius and report where fixed lookaheads stop finishing.

Long lookaheads cap the commanded curvature near 2 / l_d, so below some
radius they cut the turn past the DNF threshold. That is the regime where
mixing labels pays off.

    python scripts/hairpin_radius_scan.py --radii 0.4,0.5,0.75,1.0
"""

import argparse
import dataclasses

from adaptive_pursuit import ControllerConfig, Fixed, SimConfig, gen_track, simulate_lap
from adaptive_pursuit.formats import parse_float_list


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radii", default="0.4,0.5,0.75,1.0")
    ap.add_argument("--lookaheads", default="1.0,1.5,2.0")
    args = ap.parse_args()

    cfg = ControllerConfig()
    # lift the threshold so every lap runs to the end and the peak is observable
    sim = dataclasses.replace(SimConfig(), dnf_deviation=50.0)
    looks = parse_float_list(args.lookaheads)
    print("radius " + " ".join(f"{'l=' + str(l):>18}" for l in looks))
    for r in parse_float_list(args.radii):
        traj = gen_track("hairpin_circuit", radius=r)
        cells = []
        for l in looks:
            lap = simulate_lap(traj, Fixed(l), cfg, sim)
            flag = "*" if lap.max_deviation > SimConfig().dnf_deviation else " "
            cells.append(f"{lap.lap_time:7.2f}s {lap.max_deviation:6.3f}m{flag}")
        print(f"{r:6.2f} " + " ".join(f"{c:>18}" for c in cells))
    print("* peak deviation above the default DNF threshold")


if __name__ == "__main__":
    main()
