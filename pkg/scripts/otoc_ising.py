"""Infinite-temperature OTOC and commutator light cone of the mixed-field Ising chain."""
import argparse

import numpy as np

from scramble_lab.chaos import commutator_cone, front_positions, otoc_series
from scramble_lab.linalg import PAULI_X, PAULI_Z, embed_site
from scramble_lab.models import build_mixed_field_ising


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, default=8)
    ap.add_argument("--t-max", type=float, default=8.0)
    args = ap.parse_args()
    L = args.L
    model = build_mixed_field_ising(L)
    times = np.linspace(0, args.t_max, 33)
    pts = otoc_series(embed_site(PAULI_X, 0, L), embed_site(PAULI_X, L - 1, L), model, times)
    cone = commutator_cone(model, [embed_site(PAULI_Z, i, L) for i in range(L)], times)
    fronts = front_positions(cone)
    print(f"{'t':>6} {'Re F':>9} {'C':>9} {'front':>6}")
    for p, f in zip(pts, fronts):
        print(f"{p.t:6.2f} {p.F.real:9.4f} {p.C:9.4f} {f:6d}")


if __name__ == "__main__":
    main()
