"""Linear cross-entropy benchmarking of brick-wall circuits versus depth, with per-qubit depolarizing noise."""
import argparse

from scramble_lab.benchmarks import depolarizing, xeb_experiment
from scramble_lab.rng import RngSeed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qubits", type=int, default=4)
    ap.add_argument("--p", type=float, default=0.99, help="per-qubit depolarizing parameter per layer")
    ap.add_argument("--circuits", type=int, default=50)
    ap.add_argument("--shots", type=int, default=2000)
    args = ap.parse_args()
    res = xeb_experiment(args.qubits, [2, 4, 8, 12, 16], depolarizing(2, args.p), args.circuits, args.shots,
                         RngSeed(20240917))
    print(f"{'depth':>5} {'F_raw':>8} {'+-':>7} {'F_norm':>8} {'+-':>7}")
    for r in res:
        print(f"{r.depth:5d} {r.f_xeb:8.4f} {r.stderr:7.4f} {r.f_xeb_normalized:8.4f} {r.stderr_normalized:7.4f}")


if __name__ == "__main__":
    main()
