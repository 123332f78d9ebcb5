import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qesqnm.catalog import instantiate
from qesqnm.coordinates import DomainError, canonical_coordinate, dz_dx, x_of_z, z_of_x
from qesqnm.model import ModelError, ModelSpec, PolyP, PolyQ
from qesqnm.spectrum import spectral_levels

FORMS = {
    "shifted-osc": PolyQ(0, 0, 2.0),
    "radial-osc": PolyQ(0, 4.0, 0),
    "scarf2": PolyQ(1.5, 0, 1.5),
    "morse": PolyQ(0.7, 0, 0),
    "gen-poschl-teller": PolyQ(1.2, 0, -1.2),
    "scarf1": PolyQ(-0.8, 0, 0.8),
}

# the h = 1e-5 central difference has an error floor near h^2 |alpha| / 3 plus
# rounding, so the 1e-10 check runs on unit-rate forms
UNIT_FORMS = {
    "shifted-osc": PolyQ(0, 0, 2.0),
    "radial-osc": PolyQ(0, 4.0, 0),
    "scarf2": PolyQ(1.0, 0, 1.0),
    "morse": PolyQ(1.0, 0, 0),
    "gen-poschl-teller": PolyQ(1.0, 0, -1.0),
    "scarf1": PolyQ(-1.0, 0, 1.0),
}


def _interior(form, rng, n, margin=0.05, span=8.0):
    lo, hi = form.domain
    L = form.length
    lo = lo + margin * L if math.isfinite(lo) else -span * L
    hi = hi - margin * L if math.isfinite(hi) else span * L
    return rng.uniform(lo, hi, n)


@pytest.mark.parametrize("family", FORMS)
def test_family_detection(family):
    assert canonical_coordinate(FORMS[family]).family == family


@pytest.mark.parametrize("family", UNIT_FORMS)
def test_dz_squared_equals_q_by_central_difference(family, rng):
    form = canonical_coordinate(UNIT_FORMS[family])
    x = _interior(form, rng, 10_000, margin=1e-3)
    h = 1e-5
    xp, xm = x + h, x - h  # divide by the realized step, not 2h
    dz = (z_of_x(form, xp, check=False) - z_of_x(form, xm, check=False)) / (xp - xm)
    Q = form.Q(z_of_x(form, x))
    assert np.all(np.abs(dz**2 - Q) <= 1e-10 * (1 + np.abs(Q)))


@pytest.mark.parametrize("family", FORMS)
def test_analytic_derivative_is_positive_root_of_q(family, rng):
    form = canonical_coordinate(FORMS[family])
    x = _interior(form, rng, 1000, margin=1e-3)
    d = dz_dx(form, x)
    assert np.all(d > 0)
    np.testing.assert_allclose(d**2, form.Q(z_of_x(form, x)), rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("family", FORMS)
def test_round_trip(family, rng):
    form = canonical_coordinate(FORMS[family])
    x = _interior(form, rng, 10_000)
    back = x_of_z(form, z_of_x(form, x))
    assert np.max(np.abs(back - x) / (1 + np.abs(x))) <= 1e-12


@pytest.mark.parametrize("family", FORMS)
def test_outside_domain_raises(family):
    form = canonical_coordinate(FORMS[family])
    lo, hi = form.domain
    bad = [v for v in (lo, hi, lo - 1.0, hi + 1.0) if math.isfinite(v)] + [math.nan]
    for v in bad:
        with pytest.raises(DomainError):
            z_of_x(form, np.array([v]))


def test_invalid_q_raises():
    for q in (PolyQ(0, 0, 0), PolyQ(0, 0, -1.0), PolyQ(-1.0, 0, 1.0 * -1), PolyQ(1j, 0, 1)):
        with pytest.raises(ModelError):
            canonical_coordinate(q)


def _affine(spec: ModelSpec, s: float, t: float) -> ModelSpec:
    """Rewrite a canonical-variable spec in z = s u + t (so Q(z) = s^2 Q~((z-t)/s), P(z) = s P~((z-t)/s))."""
    A2, A1, A0 = spec.A2, spec.A1, spec.A0
    a, b, g = (complex(c).real for c in (spec.alpha, spec.beta, spec.gamma))
    P = PolyP(A2 / s, A1 - 2 * A2 * t / s, s * A0 - A1 * t + A2 * t * t / s)
    Q = PolyQ(a, s * b - 2 * a * t, s * s * g - s * b * t + a * t * t)
    return ModelSpec(P, Q, spec.N, "custom")


@given(s=st.floats(0.3, 3.0), t=st.floats(-2.0, 2.0),
       preset=st.sampled_from(["scarf2-qes-qnm", "morse-qes-real", "genpt-qes-real", "scarf1"]),
       N=st.integers(0, 3))
def test_affine_canonicalization_preserves_energies(s, t, preset, N):
    base = instantiate(preset, None, N)
    moved = _affine(base, s, t)
    E0 = sorted((lv.energy for lv in spectral_levels(base)), key=lambda e: (round(e.real, 8), round(e.imag, 8)))
    E1 = sorted((lv.energy for lv in spectral_levels(moved)), key=lambda e: (round(e.real, 8), round(e.imag, 8)))
    np.testing.assert_allclose(E1, E0, rtol=1e-9, atol=1e-9)
