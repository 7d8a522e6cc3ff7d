"""Average subsystem entropy of Haar states versus subsystem size, against the exact mean."""
import argparse

from scramble_lab.experiments import page_curve
from scramble_lab.rng import RngSeed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qubits", type=int, default=10)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=20240917)
    args = ap.parse_args()
    print(f"{'m':>6} {'S_mc':>9} {'+-':>8} {'S_exact':>9} {'log m':>9}")
    for r in page_curve(args.qubits, args.samples, RngSeed(args.seed)):
        print(f"{r['m']:>6} {r['entropy_mc']:9.4f} {r['entropy_se']:8.4f} "
              f"{r['page_exact']:9.4f} {r['log_m']:9.4f}")


if __name__ == "__main__":
    main()
