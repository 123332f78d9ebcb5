"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed
in the terminal summary.  Run alone with  python3 -m pytest tests/test_acceptance.py -v
"""

import json
import time

import numpy as np
import pytest

from qesqnm.bethe import algebraize, conjugation_closure, qes_levels, residual_scale
from qesqnm.catalog import instantiate, list_presets
from qesqnm.cli import EXIT_INVALID, EXIT_OK, EXIT_UNSUPPORTED, EXIT_VERIFY, main
from qesqnm.coordinates import canonicalize
from qesqnm.model import ModelSpec, PolyP, PolyQ
from qesqnm.prepotential import endpoint_analysis
from qesqnm.spectrum import ModeClass, spectral_levels
from qesqnm.verifier import (
    ORDER_BAND,
    Grid,
    convergence_order,
    fd_oracle,
    match_energies,
    parity_equivalence,
    summation_identities,
    truncation,
)

HALF = (0.5, 1.0, 2.0)


def _draws(preset, rng, N, k):
    out = []
    try:
        out.append(preset.resolve(None, N))
    except ValueError:
        pass
    return out + [preset.random_params(rng, N) for _ in range(k)]


def test_criterion_01_exact_ladder_reproduction():
    rng = np.random.default_rng(101)
    N = 8
    n = np.arange(N + 1)
    for _ in range(100):
        A1, alpha, A0 = rng.uniform(0.1, 5.0), rng.uniform(0.1, 3.0), rng.uniform(-3.0, 3.0)
        spec = ModelSpec(PolyP(0, A1, A0), PolyQ(alpha, 0, alpha), N, "scarf2")
        eig = np.sort_complex(np.linalg.eigvals(algebraize(spec).matrix))
        assert np.max(np.abs(eig - np.sort_complex((2 * A1 * n - alpha * n**2).astype(complex)))) <= 1e-10
        for lv in spectral_levels(spec):
            E = 2 * A1 * lv.n - alpha * lv.n**2 - A1**2 / alpha
            assert abs(lv.energy - E) <= 1e-10 * max(1.0, abs(E))


def _check_ladder(pid, params, N, formula):
    for lv in spectral_levels(instantiate(pid, params, N)):
        E = formula(lv.n)
        assert abs(lv.energy - E) <= 1e-10 * max(1.0, abs(E)), (pid, params, N, lv.n, lv.energy, E)


def test_criterion_02_qnm_formula_reproduction():
    for alpha in HALF:
        for c in HALF:
            for N in range(6):
                _check_ladder("scarf2-qnm", {"alpha": alpha, "c": c, "d": 0.3}, N,
                              lambda n: c**2 / (4 * alpha) - (n + 0.5) ** 2 * alpha - 1j * c * (n + 0.5))
                _check_ladder("genpt-qnm", {"alpha": alpha, "c": c, "d": 0.7}, N,
                              lambda n: c**2 / (4 * alpha) - (n + 0.5) ** 2 * alpha - 1j * c * (n + 0.5))
                for d in (0.0, 1.0, 2.0):
                    _check_ladder("morse-qnm", {"alpha": alpha, "c": c, "d": d}, N,
                                  lambda n: alpha * ((d**2 - 1) / 4 - n * n - n - 1j * d * (n + 0.5)))
                _check_ladder("shifted-osc-qnm", {"gamma": alpha, "c": c}, N, lambda n: -1j * c * (n + 0.5))
                for gamma in HALF:
                    _check_ladder("radial-osc-qnm", {"a": c, "gamma": gamma}, N,
                                  lambda n: -1j * c * (4 * n + 2 * gamma + 1))


def test_criterion_03_singular_scarf_theorem():
    rng = np.random.default_rng(103)
    for N in range(1, 11):
        for _ in range(10):
            alpha, c = np.exp(rng.uniform(np.log(0.1), np.log(5.0), 2))
            for lv in spectral_levels(instantiate("scarf2-singular", {"alpha": alpha, "c": c}, N)):
                assert abs(lv.level.root_sum.real) < 1e-10, (N, alpha, c)
                assert abs(lv.energy.imag) < 1e-9
                assert conjugation_closure(lv.level.roots).closed


def test_criterion_04_parity_equivalence():
    for N in range(6):
        for c in HALF:
            for d in (0.0, 1.0, 2.0):
                rep = parity_equivalence(instantiate("morse-qnm-mirror", {"c": c, "d": d}, N))
                assert rep.energy_deviation <= 1e-10, (N, c, d)
                assert rep.bae_residual <= 1e-9, (N, c, d)
                assert rep.ratio_deviation <= 1e-8, (N, c, d)


def test_criterion_05_bae_cross_validation():
    rng = np.random.default_rng(105)
    count = 0
    for preset in list_presets():
        for N in range(7):
            for params in _draws(preset, rng, N, 4):
                spec = preset.instantiate(params, N)
                _, cspec = canonicalize(spec)
                for lv in qes_levels(spec):
                    if "defective" in lv.flags:
                        continue
                    count += 1
                    assert lv.residual_max < 1e-9 * residual_scale(cspec, lv.roots), (preset.id, N, params)
                    ids = summation_identities(lv)
                    if not ids.warnings:
                        assert max(ids.per_root_deviation, ids.double_sum_deviation) < 1e-10
    assert count > 2000


def test_criterion_06_oracle_agreement_sextic():
    for N in (1, 2, 3):
        t0 = time.perf_counter()
        spec = instantiate("sextic-qes", {"a": 1.0, "b": 1.0}, N)
        E = [lv.energy for lv in spectral_levels(spec)]
        assert len(E) == N + 1
        lo, hi = truncation(spec, max(abs(e) for e in E))
        res = fd_oracle(spec, Grid(lo, hi, 4001), k=2 * len(E) + 4, targets=E)
        rows = match_energies(E, res.eigenvalues, rel_tol=1e-3)
        assert all(r["passed"] for r in rows), rows
        assert len({r["index"] for r in rows}) == len(rows)
        assert res.truncation_ok, res.max_shift
        assert time.perf_counter() - t0 < 10.0


def test_criterion_07_residual_convergence():
    bad = []
    for preset in list_presets():
        for N in range(4):
            try:
                spec = preset.instantiate(None, N)
            except ValueError:
                continue
            for lv in spectral_levels(spec):
                lo, hi = truncation(spec, lv.energy)
                g = Grid(lo, hi, 2001)
                est = convergence_order(spec, lv, (g, Grid(lo, hi, 4001)))
                if not (2.0 - 0.3 <= est.order <= 2.0 + 0.3):
                    bad.append((preset.id, N, lv.n, est.order))
    assert ORDER_BAND == (1.7, 2.3)
    assert not bad, bad


def test_criterion_08_verdict_reproduction():
    failures = []
    for pid, params in (("scarf2-qes-real-none", None), ("shifted-osc", {"A2": 0.5}), ("scarf1", None)):
        for N in range(4):
            spec = instantiate(pid, params, N)
            v = endpoint_analysis(spec).verdict.value
            modes = {lv.mode for lv in spectral_levels(spec)}
            if v != "NonNormalizable" or modes != {ModeClass.NON_NORMALIZABLE}:
                failures.append(f"{pid} N={N}: verdict {v}, modes {sorted(m.value for m in modes)}")
    for N in range(4):
        params = {"alpha": 1.0, "A2": 1.0, "A1": 1.0, "A0": -4.0}
        assert params["A2"] + params["A1"] + params["A0"] < 0
        for lv in spectral_levels(instantiate("genpt-qes-real", params, N)):
            if lv.mode is not ModeClass.BOUND or abs(lv.energy.imag) >= 1e-9:
                failures.append(f"genpt-qes-real N={N} n={lv.n}: {lv.mode.value} {lv.energy}")
        for a, ok in ((N + 0.5, False), (N, False), (N + 0.6, True)):
            try:
                instantiate("genpt-qes-qnm", {"a": a}, N)
                accepted = True
            except ValueError:
                accepted = False
            if accepted != ok:
                failures.append(f"genpt-qes-qnm N={N} a={a}: accepted={accepted}")
    assert not failures, "\n".join(failures)


def test_criterion_09_scarf2_and_genpt_ladders_coincide():
    rng = np.random.default_rng(109)
    for _ in range(50):
        A1, alpha = rng.uniform(0.2, 5.0), rng.uniform(0.2, 3.0)
        N = int(rng.integers(0, 8))
        e1 = [lv.energy for lv in spectral_levels(instantiate("scarf2-exact", {"alpha": alpha, "A1": A1}, N))]
        e2 = [lv.energy for lv in spectral_levels(instantiate("genpt-exact", {"alpha": alpha, "A1": A1}, N))]
        assert np.max(np.abs(np.array(e1) - np.array(e2))) <= 1e-12


def test_criterion_10_cli_determinism_and_exit_codes(tmp_path):
    def solve(args, name):
        out = tmp_path / name
        code = main(["solve", *args, "--out", str(out)])
        return code, out.read_bytes() if out.exists() else b""

    for preset in list_presets():
        for N in range(4):
            args = ["--preset", preset.id, "--N", str(N)]
            if preset.id == "genpt-qes-qnm":
                args += ["--a", "4"]
            c1, b1 = solve(args, "a.json")
            c2, b2 = solve(args, "b.json")
            assert c1 == c2 == EXIT_OK and b1 == b2, (preset.id, N)
            c3, b3 = solve(["--spec-file", str(tmp_path / "a.json")], "c.json")
            assert c3 == EXIT_OK and b3 == b1, (preset.id, N)
            assert main(["verify", *args, "--out", str(tmp_path / "v.json")]) == EXIT_OK, (preset.id, N)
            json.loads((tmp_path / "v.json").read_text())
    assert main(["solve", "--preset", "genpt-qes-qnm", "--a", "0.4"]) == EXIT_INVALID
    assert main(["solve", "--spec", "{"]) == EXIT_INVALID
    higher = json.dumps({"P_higher": [[1, 0]], "alpha": [1, 0], "gamma": [1, 0], "N": 1})
    assert main(["solve", "--spec", higher]) == EXIT_UNSUPPORTED
    assert main(["verify", "--preset", "sextic-qes", "--N", "1", "--tol", "-1",
                 "--out", str(tmp_path / "f.json")]) == EXIT_VERIFY


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
