"""Verify every preset for a range of N and print one row per (preset, N)."""

import argparse
import time

from qesqnm.catalog import list_presets
from qesqnm.verifier import VerifyConfig, verify_model


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--grid-points", type=int, default=2001)
    args = ap.parse_args()
    cfg = VerifyConfig(grid_points=args.grid_points)
    print(f"{'preset':22s} {'N':>2s} {'ok':>3s} {'min order':>9s} {'max order':>9s} {'max BAE':>9s} {'oracle':>9s} "
          f"{'sec':>5s}  notes")
    for preset in list_presets():
        for N in range(args.n_max + 1):
            try:
                spec = preset.instantiate(None, N)
            except ValueError as exc:
                print(f"{preset.id:22s} {N:2d}   -  {exc}")
                continue
            t0 = time.perf_counter()
            rep = verify_model(spec, cfg)
            dt = time.perf_counter() - t0
            orders = [c.magnitude for c in rep.checks if c.name.endswith("convergence order")]
            bae = max((c.magnitude for c in rep.checks if c.name.endswith("BAE residual")), default=0.0)
            oracle = next((f"{c.magnitude:9.1e}" for c in rep.checks if c.name == "fd oracle"), f"{'-':>9s}")
            notes = "; ".join(f for f in rep.flags if "oracle" in f)
            print(f"{preset.id:22s} {N:2d} {'yes' if rep.passed else 'NO':>3s} {min(orders):9.3f} "
                  f"{max(orders):9.3f} {bae:9.1e} {oracle} {dt:5.2f}  {notes}")


if __name__ == "__main__":
    main()
