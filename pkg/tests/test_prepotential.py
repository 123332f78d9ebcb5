import math

import numpy as np
import pytest

from qesqnm.bethe import qes_levels
from qesqnm.catalog import list_presets
from qesqnm.coordinates import canonicalize, dz_dx, z_of_x
from qesqnm.prepotential import (
    EndpointVerdict,
    Normalizability,
    combine_verdict,
    endpoint_analysis,
    trend_check,
    w0_closed_form,
    w0_quadrature,
)
from qesqnm.model import ModelSpec, PolyP, PolyQ

FAMILIES = sorted({p.family for p in list_presets()})


def _draws(family, rng, n):
    presets = [p for p in list_presets() if p.family == family]
    for i in range(n):
        pr = presets[i % len(presets)]
        N = int(rng.integers(0, 4))
        yield pr.instantiate(pr.random_params(rng, N), N)


def _points(form, rng, n):
    lo, hi = form.domain
    L = form.length
    lo = lo + 0.02 * L if math.isfinite(lo) else -4 * L
    hi = hi - 0.02 * L if math.isfinite(hi) else 4 * L
    return np.sort(rng.uniform(lo, hi, n))


@pytest.mark.parametrize("family", FAMILIES)
def test_closed_form_w0_matches_quadrature(family, rng):
    for spec in _draws(family, rng, 100):
        pre = w0_closed_form(spec)
        x = _points(pre.form, rng, 32)
        ref = x[len(x) // 2]
        closed = pre.w0(x) - pre.w0(np.array([ref]))[0]
        quad = w0_quadrature(spec, x, ref)
        assert np.max(np.abs(closed - quad) / (1 + np.abs(quad))) <= 1e-8, spec.to_dict()


@pytest.mark.parametrize("family", FAMILIES)
def test_w0_derivative_is_p_over_sqrt_q(family, rng):
    h = 1e-6
    for spec in _draws(family, rng, 20):
        pre = w0_closed_form(spec)
        x = _points(pre.form, rng, 32)
        fd = (pre.w0(x + h, check=False) - pre.w0(x - h, check=False)) / (2 * h)
        exact = pre.spec.p(z_of_x(pre.form, x)) / np.sqrt(pre.form.Q(z_of_x(pre.form, x)))
        np.testing.assert_allclose(fd, exact, rtol=1e-6, atol=1e-6)
        np.testing.assert_allclose(pre.dw0(x), exact, rtol=1e-12)


@pytest.mark.parametrize("preset", list_presets(), ids=lambda p: p.id)
def test_endpoint_verdicts_agree_with_sampled_trend(preset):
    for N in range(4):
        spec = preset.instantiate(None if preset.id != "genpt-qes-qnm" else {"a": 4.0}, N)
        for lv in qes_levels(spec):
            for row in trend_check(spec, lv.degree, lv.roots):
                assert row["consistent"], (preset.id, N, row)


def test_gaussian_ground_state_is_normalizable():
    spec = ModelSpec(PolyP(0, 1.0, 0), PolyQ(0, 0, 1.0), 0)
    pre = w0_closed_form(spec)
    x = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(pre.phi0(x), np.exp(-x**2 / 2), rtol=1e-14)
    assert endpoint_analysis(spec).verdict is Normalizability.NORMALIZABLE


def test_combine_verdict_cases():
    spec = ModelSpec(PolyP(0, -0.5j * 2.0, 0), PolyQ(0, 0, 1.0), 0)  # inverted oscillator ladder
    eps = endpoint_analysis(spec).endpoints
    assert all(e.verdict is EndpointVerdict.BOUNDED and e.oscillatory for e in eps)
    assert combine_verdict(eps, energy_complex=True) is Normalizability.QNM_OUTGOING
    assert combine_verdict(eps, energy_complex=False) is Normalizability.NON_NORMALIZABLE


def test_roots_at_regular_end_shift_the_exponent():
    # radial oscillator: a root at z = 0 adds a factor x^2 at the origin
    spec = ModelSpec(PolyP(0, 1.0, -1.0), PolyQ(0, 4.0, 0), 1)
    form, _ = canonicalize(spec)
    base = endpoint_analysis(spec, roots=[2.0]).endpoints[0].coeffs[0]
    moved = endpoint_analysis(spec, roots=[0.0]).endpoints[0].coeffs[0]
    assert moved == base - 2
    assert dz_dx(form, np.array([1.0]))[0] == 2.0
