"""Spectral form factor of GUE matrices with its dip, ramp and plateau, next to a Poisson control."""
import argparse

import numpy as np

from scramble_lab.chaos import analyze_sff, sff_curve
from scramble_lab.models import build_gue
from scramble_lab.rng import RngSeed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=128)
    ap.add_argument("--draws", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20240917)
    args = ap.parse_args()
    d = args.dim
    times = np.logspace(-1, np.log10(30 * d), 300)
    late = 3 * d
    seed = RngSeed(args.seed)
    gue = sff_curve(lambda s: build_gue(d, s), times, 0.0, args.draws, seed.child(0))
    poisson = sff_curve(lambda s: np.sort(s.generator().normal(size=d)), times, 0.0, args.draws, seed.child(1))
    for name, curve in (("GUE", gue), ("Poisson", poisson)):
        r = analyze_sff(curve, late)
        print(f"{name:8s} dip t={r.dip_time:8.3f} K={r.dip_value:9.3f}  ramp={r.has_ramp} "
              f"slope={r.ramp_slope:5.2f}  plateau/D={r.plateau / d:6.3f}")
    print("\n      t        K_GUE    K_Poisson")
    for i in range(0, times.size, 20):
        print(f"{times[i]:9.3f} {gue.values[i]:10.3f} {poisson.values[i]:10.3f}")


if __name__ == "__main__":
    main()
