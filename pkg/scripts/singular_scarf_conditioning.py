"""Largest |Re sum z_k| over the levels of the singular Scarf II preset on a (c/alpha, N) grid.

The roots crowd the zeros of Q at z = +-i as c/alpha grows, which limits how
accurately they can be resolved in double precision.
"""

import argparse

from qesqnm.catalog import instantiate
from qesqnm.spectrum import spectral_levels

def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=0.1)
    ap.add_argument("--n-max", type=int, default=10)
    args = ap.parse_args()
    ratios = [1, 3, 10, 30, 100, 300]
    print("N   " + "".join(f"{f'c/a={r}':>12s}" for r in ratios))
    for N in range(1, args.n_max + 1):
        row = []
        for r in ratios:
            levels = spectral_levels(instantiate("scarf2-singular", {"alpha": args.alpha, "c": r * args.alpha}, N))
            row.append(max(abs(lv.level.root_sum.real) for lv in levels))
        print(f"{N:<4d}" + "".join(f"{v:12.1e}" for v in row))
    print("criterion threshold: 1e-10")


if __name__ == "__main__":
    main()
