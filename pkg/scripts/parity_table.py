"""Deviations between the mirrored Morse QES model and its exact QNM partner."""

import argparse

from qesqnm.catalog import instantiate
from qesqnm.verifier import parity_equivalence


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=5)
    ap.add_argument("--alpha", type=float, default=1.0)
    args = ap.parse_args()
    print(f"{'N':>2s} {'c':>4s} {'d':>4s} {'energy dev':>11s} {'BAE resid':>11s} {'ratio dev':>11s}  pass")
    for N in range(args.n_max + 1):
        for c in (0.5, 1.0, 2.0):
            for d in (0.0, 1.0, 2.0):
                r = parity_equivalence(instantiate("morse-qnm-mirror", {"alpha": args.alpha, "c": c, "d": d}, N))
                print(f"{N:2d} {c:4.1f} {d:4.1f} {r.energy_deviation:11.2e} {r.bae_residual:11.2e} "
                      f"{r.ratio_deviation:11.2e}  {r.passed}")


if __name__ == "__main__":
    main()
