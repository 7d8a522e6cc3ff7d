"""Single-qubit Clifford randomized benchmarking under depolarizing noise."""
import argparse

import numpy as np

from scramble_lab.benchmarks import depolarizing, rb_experiment
from scramble_lab.rng import RngSeed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.99)
    ap.add_argument("--sequences", type=int, default=200)
    ap.add_argument("--shots", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20240917)
    args = ap.parse_args()
    res = rb_experiment(1, depolarizing(2, args.p), np.arange(1, 101, 5), args.sequences, args.shots,
                        RngSeed(args.seed))
    f = res.fit
    print(f"fit: A={f.A:.4f} p={f.p:.5f} +- {f.stderr[1]:.5f} B={f.B:.4f}  F_avg={res.avg_fidelity:.5f}")
    for m, s, e in zip(res.lengths, res.survival, res.stderr):
        print(f"{m:4d} {s:.4f} +- {e:.4f}   model {f.A * f.p**m + f.B:.4f}")


if __name__ == "__main__":
    main()
