"""Scarf I with A2 != 0: endpoint exponents, verdicts and a Dirichlet oracle.

Near x = -+pi/(2 sqrt a) the ground factor behaves as cos(sqrt(a) x)^p with
p = (A1 -+ (A0 + A2))/a, so the states vanish at both walls whenever
A1 > |A0 + A2|.  The QES energies are then compared with the eigenvalues of a
finite-difference Hamiltonian on the interval with Dirichlet walls.
"""

import argparse

from qesqnm.catalog import instantiate
from qesqnm.prepotential import endpoint_analysis
from qesqnm.spectrum import spectral_levels
from qesqnm.verifier import default_grid, fd_oracle, match_energies


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--A2", type=float, default=0.5)
    ap.add_argument("--A1", type=float, default=2.0)
    ap.add_argument("--A0", type=float, default=0.5)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--grid-points", type=int, default=4001)
    args = ap.parse_args()
    p = {"a": args.a, "A2": args.A2, "A1": args.A1, "A0": args.A0}
    lo_exp = (args.A1 - (args.A0 + args.A2)) / args.a
    hi_exp = (args.A1 + (args.A0 + args.A2)) / args.a
    print(f"parameters {p}")
    print(f"ground-factor exponents of cos at the walls: left {lo_exp:.4f}, right {hi_exp:.4f}")
    for N in range(args.n_max + 1):
        spec = instantiate("scarf1", p, N)
        rep = endpoint_analysis(spec)
        levels = spectral_levels(spec)
        E = [lv.energy for lv in levels]
        res = fd_oracle(spec, default_grid(spec, max(abs(e) for e in E), args.grid_points), k=2 * len(E) + 4)
        rows = match_energies(E, res.eigenvalues)
        print(f"N={N} verdict={rep.verdict.value}")
        for lv, r in zip(levels, rows):
            print(f"   n={lv.n} E={lv.energy.real:+.10f}{lv.energy.imag:+.1e}j  oracle={r['oracle']:+.10f} "
                  f"rel.err={r['rel_error']:.1e}  class={lv.mode.value}")


if __name__ == "__main__":
    main()
