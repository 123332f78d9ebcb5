import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qesqnm.catalog import instantiate
from qesqnm.model import ModelSpec, PolyP, PolyQ
from qesqnm.spectrum import spectral_levels
from qesqnm.verifier import (
    ORDER_BAND,
    Grid,
    VerifyConfig,
    convergence_order,
    default_grid,
    fd_oracle,
    is_morse_mirror,
    match_energies,
    mirror_partner,
    oracle_applicable,
    parity_equivalence,
    residual_norm,
    summation_identities,
    truncation,
    verify_model,
)

cplx = st.builds(complex, st.floats(-5, 5), st.floats(-5, 5))


def test_oracle_reproduces_harmonic_oscillator():
    spec = ModelSpec(PolyP(0, 1.0, 0), PolyQ(0, 0, 1.0), 0)  # V = x^2, E_n = 2n + 1
    res = fd_oracle(spec, Grid(-8, 8, 4001), k=6)
    np.testing.assert_allclose(res.eigenvalues, 2 * np.arange(6) + 1, rtol=1e-5)
    assert res.truncation_ok


def test_oracle_on_a_finite_interval():
    # Scarf I ground state with the Dirichlet wall at the true endpoints
    spec = ModelSpec(PolyP(0, 2.0, 0.0), PolyQ(-1.0, 0, 1.0), 0, "scarf1")
    E0 = spectral_levels(spec)[0].energy
    res = fd_oracle(spec, default_grid(spec, E0, 4001), k=3)
    rows = match_energies([E0], res.eigenvalues)
    assert rows[0]["passed"] and rows[0]["index"] == 0


def test_match_energies_uses_relative_error():
    rows = match_energies([10.0, 0.5], np.array([0.5001, 10.01]), rel_tol=1e-3)
    assert [r["index"] for r in rows] == [1, 0]
    assert rows[0]["rel_error"] == pytest.approx(1e-3) and rows[1]["rel_error"] == pytest.approx(1e-4)


def test_oracle_refused_for_potential_unbounded_below():
    spec = instantiate("scarf2-singular", None, 2)
    E = [lv.energy for lv in spectral_levels(spec)]
    lo, hi = truncation(spec, max(abs(e) for e in E))
    ok, why = oracle_applicable(spec, Grid(lo, hi, 2001), E)
    assert not ok and "below" in why
    report = verify_model(spec)
    assert any("fd oracle skipped" in f for f in report.flags)
    assert not any(c.name == "fd oracle" for c in report.checks)


def test_residual_converges_at_second_order():
    spec = instantiate("morse-qes-qnm", None, 2)
    for lv in spectral_levels(spec):
        g = default_grid(spec, lv.energy)
        est = convergence_order(spec, lv, (g, g.refined()))
        assert ORDER_BAND[0] <= est.order <= ORDER_BAND[1]
        assert residual_norm(spec, lv, g.refined()).l2 < est.coarse.l2


def test_wrong_energy_does_not_converge():
    spec = instantiate("sextic-qes", None, 1)
    lv = spectral_levels(spec)[0]
    lv.energy = lv.energy + 0.1
    g = default_grid(spec, lv.energy)
    est = convergence_order(spec, lv, (g, g.refined()))
    assert not est.passed


@given(st.lists(cplx, min_size=2, max_size=9, unique=True))
def test_summation_identities_hold_for_any_distinct_points(z):
    z = np.array(z)
    if np.min(np.abs(z[:, None] - z[None, :]) + np.eye(len(z))) < 1e-3:
        return
    rep = summation_identities(z)
    assert rep.passed(1e-9 * len(z) ** 2)


def test_summation_identities_flag_clusters():
    rep = summation_identities([1.0, 1.0 + 1e-13, 2.0])
    assert rep.warnings == ["clustered-roots"]


@pytest.mark.parametrize("N", range(4))
@pytest.mark.parametrize("c,d", [(0.5, 0.0), (1.0, 1.0), (2.0, 2.0)])
def test_parity_equivalence(N, c, d):
    spec = instantiate("morse-qnm-mirror", {"c": c, "d": d}, N)
    assert is_morse_mirror(spec)
    partner, c2, d2 = mirror_partner(spec)
    assert (c2, d2) == pytest.approx((c, d))
    rep = parity_equivalence(spec)
    assert rep.passed, rep.to_dict()


def test_mirror_and_partner_share_the_top_level_value():
    # the quoted value -alpha[...] = 5.25 + 5i is the potential constant C = -E
    p = {"alpha": 1.0, "c": 1.0, "d": 2.0}
    for pid in ("morse-qnm", "morse-qnm-mirror"):
        E = {lv.energy for lv in spectral_levels(instantiate(pid, p, 2))}
        assert min(abs(e - (-5.25 - 5j)) for e in E) < 1e-10


def test_parity_requires_a_mirror_model():
    spec = instantiate("morse-qnm", None, 1)
    assert not is_morse_mirror(spec)
    with pytest.raises(ValueError):
        parity_equivalence(spec)


def test_report_is_json_serializable():
    report = verify_model(instantiate("genpt-qes-real", None, 2), VerifyConfig(grid_points=1001))
    doc = json.loads(json.dumps(report.to_dict()))
    assert doc["passed"] is True
    names = [c["name"] for c in doc["checks"]]
    assert "fd oracle" in names and sum("convergence order" in n for n in names) == 3
