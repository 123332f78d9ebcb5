"""Closed-form prepotentials W0(x), ground-state factor exp(-W0), endpoint asymptotics."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .coordinates import CanonicalCoordinate, canonicalize, dz_dx, x_of_z, z_of_x
from .model import ModelSpec

_LN2 = math.log(2.0)


def _log_cosh(s):
    a = np.abs(s)
    return a + np.log1p(np.exp(-2 * a)) - _LN2


def _log_sinh(s):
    # s > 0
    return s + np.log1p(-np.exp(-2 * s)) - _LN2


@dataclass(frozen=True)
class Prepotential:
    form: CanonicalCoordinate
    spec: ModelSpec  # canonical

    def w0(self, x, check: bool = True):
        """W0(x), complex; additive constant as in the standard closed forms."""
        f = self.form
        x = np.asarray(x, dtype=float)
        z = z_of_x(f, x, check=check)
        A2, A1, A0 = self.spec.A2, self.spec.A1, self.spec.A0
        fam = f.family
        if fam == "shifted-osc":
            g = f.gamma
            return (A2 * z**3 / 3 + A1 * z**2 / 2 + A0 * z) / g
        if fam == "radial-osc":
            b = f.beta
            return A2 * b * x**4 / 32 + A1 * x**2 / 4 + (2 * A0 / b) * np.log(x)
        a = f.alpha
        s = f.rate * x
        if fam == "scarf2":
            return (A2 * z + A1 * _log_cosh(s) + (A0 - A2) * np.arctan(z)) / a
        if fam == "morse":
            return (A2 * z + A1 * s - A0 * np.exp(-s)) / a
        if fam == "gen-poschl-teller":
            # coth^{-1}(cosh s) = -ln tanh(s/2)
            return (A2 * z + A1 * _log_sinh(s) + (A0 + A2) * np.log(np.tanh(s / 2))) / a
        # scarf1, alpha < 0
        k = -a
        return (-A2 * z - A1 * np.log(np.cos(s)) + (A0 + A2) * np.arctanh(z)) / k

    def dw0(self, x, check: bool = True):
        """W0'(x) = P(z)/sqrt(Q(z)) on the + branch."""
        z = z_of_x(self.form, x, check=check)
        return self.spec.p(z) / dz_dx(self.form, x)

    def phi0(self, x, check: bool = True):
        return np.exp(-self.w0(x, check=check))


def w0_closed_form(spec: ModelSpec) -> Prepotential:
    form, cspec = canonicalize(spec)
    return Prepotential(form, cspec)


def phi0(spec: ModelSpec, x):
    return w0_closed_form(spec).phi0(x)


def w0_quadrature(spec: ModelSpec, x, x_ref: float) -> np.ndarray:
    """W0(x) - W0(x_ref) by adaptive quadrature of P(z)/Q(z) along z."""
    pre = w0_closed_form(spec)
    f = pre.form
    P, Q = pre.spec.p, f.Q
    zr = float(z_of_x(f, x_ref))
    out = []
    for xi in np.atleast_1d(np.asarray(x, dtype=float)):
        zi = float(z_of_x(f, xi))
        re = integrate.quad(lambda z: (P(z) / Q(z)).real, zr, zi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        im = integrate.quad(lambda z: (P(z) / Q(z)).imag, zr, zi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        out.append(complex(re, im))
    return np.array(out)


# -- endpoint asymptotics ------------------------------------------------------------


class EndpointVerdict(enum.Enum):
    DECAYING = "Decaying"
    GROWING = "Growing"
    POWER_DIVERGENT = "PowerDivergent"
    BOUNDED = "Bounded"


_GAUGE_KIND = {
    "exp|s|": "exponential-of-exponential",
    "|s|": "exponential",
    "|x|^3": "exponential-of-power",
    "x^4": "exponential-of-power",
    "|x|^2": "exponential-of-power",
    "x^2": "exponential-of-power",
    "|x|": "exponential",
    "ln|x|": "power",
    "ln x": "power",
    "ln(1/t)": "power",
}


class Normalizability(enum.Enum):
    NORMALIZABLE = "Normalizable"
    NON_NORMALIZABLE = "NonNormalizable"
    QNM_OUTGOING = "QnmOutgoing"


@dataclass(frozen=True)
class Endpoint:
    """Asymptotics of log(phi0 * p_N) = sum_k coeffs[k] * gauges[k] near one endpoint.

    Gauges are listed in decreasing dominance; each diverges to +inf at the
    endpoint ("ln(1/t)" means the log of the inverse distance to a finite end).
    """

    name: str
    x: float
    finite: bool
    gauges: tuple[str, ...]
    coeffs: tuple[complex, ...]
    tol: float = 1e-12

    @property
    def deciding_index(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if abs(c.real) > self.tol * (1 + abs(c)):
                return i
        return None

    @property
    def verdict(self) -> EndpointVerdict:
        i = self.deciding_index
        if i is None:
            return EndpointVerdict.BOUNDED
        if self.coeffs[i].real < 0:
            return EndpointVerdict.DECAYING
        if self.gauges[i].startswith("ln"):
            return EndpointVerdict.POWER_DIVERGENT
        return EndpointVerdict.GROWING

    @property
    def descriptor(self) -> str:
        i = self.deciding_index
        if i is None:
            return "oscillatory-modulus-one" if self.oscillatory else "bounded"
        return _GAUGE_KIND[self.gauges[i]]

    @property
    def oscillatory(self) -> bool:
        i = self.deciding_index
        upto = len(self.coeffs) if i is None else i + 1
        return any(abs(c.imag) > self.tol * (1 + abs(c)) for c in self.coeffs[:upto])

    @property
    def acceptable(self) -> bool:
        """Square-integrable behaviour with phi -> 0 or regular at a finite end."""
        v = self.verdict
        return v is EndpointVerdict.DECAYING or (self.finite and v is EndpointVerdict.BOUNDED)

    def to_dict(self) -> dict:
        return {
            "endpoint": self.name,
            "verdict": self.verdict.value,
            "descriptor": self.descriptor,
            "oscillatory": self.oscillatory,
            "leading": [
                {"gauge": g, "coefficient": [c.real, c.imag]} for g, c in zip(self.gauges, self.coeffs)
            ],
        }


@dataclass
class EndpointReport:
    endpoints: list[Endpoint]
    verdict: Normalizability
    energy_complex: bool | None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "endpoints": [e.to_dict() for e in self.endpoints],
            "notes": list(self.notes),
        }


def _count_roots_at(roots, z0: float, tol: float = 1e-9) -> int:
    if roots is None:
        return 0
    return int(sum(abs(r - z0) <= tol * (1 + abs(z0)) for r in roots))


def asymptotic_endpoints(spec: ModelSpec, degree: int, roots=None) -> list[Endpoint]:
    """Leading asymptotic bookkeeping of phi0 * p at every endpoint."""
    form, c = canonicalize(spec)
    A2, A1, A0 = c.A2, c.A1, c.A0
    n = degree
    fam = form.family
    lo, hi = form.domain
    if fam == "shifted-osc":
        rg = math.sqrt(form.gamma)
        out = []
        for name, sig, xe in (("-inf", -1, lo), ("+inf", 1, hi)):
            out.append(
                Endpoint(
                    name, xe, False,
                    ("|x|^3", "|x|^2", "|x|", "ln|x|"),
                    (-sig * A2 * rg / 3, -A1 / 2, -sig * A0 / rg, complex(n)),
                )
            )
        return out
    if fam == "radial-osc":
        b = form.beta
        m0 = _count_roots_at(roots, 0.0)
        return [
            Endpoint("0", 0.0, True, ("ln(1/t)",), (2 * A0 / b - 2 * m0,)),
            Endpoint("+inf", hi, False, ("x^4", "x^2", "ln x"), (-A2 * b / 32, -A1 / 4, -2 * A0 / b + 2 * n)),
        ]
    a = form.alpha
    if fam == "scarf2":
        return [
            Endpoint(name, xe, False, ("exp|s|", "|s|"), (-sig * A2 / (2 * a), -A1 / a + n))
            for name, sig, xe in (("-inf", -1, lo), ("+inf", 1, hi))
        ]
    if fam == "morse":
        m0 = _count_roots_at(roots, 0.0)
        return [
            Endpoint("-inf", lo, False, ("exp|s|", "|s|"), (A0 / a, A1 / a - m0)),
            Endpoint("+inf", hi, False, ("exp|s|", "|s|"), (-A2 / a, -A1 / a + n)),
        ]
    if fam == "gen-poschl-teller":
        m1 = _count_roots_at(roots, 1.0)
        return [
            Endpoint("0", 0.0, True, ("ln(1/t)",), ((A0 + A1 + A2) / a - 2 * m1,)),
            Endpoint("+inf", hi, False, ("exp|s|", "|s|"), (-A2 / (2 * a), -A1 / a + n)),
        ]
    k = -a
    mp = _count_roots_at(roots, 1.0)
    mm = _count_roots_at(roots, -1.0)
    return [
        Endpoint("-pi/2", lo, True, ("ln(1/t)",), (-(A1 - A0 - A2) / k - 2 * mm,)),
        Endpoint("+pi/2", hi, True, ("ln(1/t)",), (-(A0 + A1 + A2) / k - 2 * mp,)),
    ]


def combine_verdict(endpoints: list[Endpoint], energy_complex: bool) -> Normalizability:
    if all(e.acceptable for e in endpoints):
        if energy_complex and any(e.oscillatory for e in endpoints):
            return Normalizability.QNM_OUTGOING
        return Normalizability.NORMALIZABLE
    if energy_complex and all(e.acceptable or (not e.finite and e.oscillatory) for e in endpoints):
        return Normalizability.QNM_OUTGOING
    return Normalizability.NON_NORMALIZABLE


def endpoint_analysis(spec: ModelSpec, N: int | None = None, energy: complex | None = None, roots=None,
                      tol: float = 1e-9) -> EndpointReport:
    """Per-endpoint verdicts for phi0 * p_N and the overall normalizability verdict.

    If ``energy`` is not given, the QNM regime is decided from the energies of
    the degree-N levels of the model.  QnmOutgoing is a convention for complex
    energies whose eigenfunctions are oscillatory, outgoing or polynomially
    modulated at infinity; it is not an L2 statement.
    """
    N = spec.N if N is None else N
    eps = asymptotic_endpoints(spec, N, roots)
    notes = []
    if energy is None:
        if all(complex(v).imag == 0 for v in (*spec.p.coeffs(), *spec.q.coeffs())):
            cplx = False
        else:
            from .bethe import qes_levels
            from .spectrum import level_energy

            levels = [lv for lv in qes_levels(spec) if lv.degree == N]
            es = [level_energy(spec, lv) for lv in levels]
            cplx = any(abs(e.imag) > tol * (1 + abs(e.real)) for e in es)
            notes.append("energy regime taken from the degree-N levels")
    else:
        cplx = abs(energy.imag) > tol * (1 + abs(energy.real))
    verdict = combine_verdict(eps, cplx)
    if verdict is Normalizability.QNM_OUTGOING:
        notes.append("QnmOutgoing is a convention for complex-energy modes, not an L2 statement")
    return EndpointReport(eps, verdict, cplx, notes)


# -- numeric trend guard --------------------------------------------------------------


def log_modulus(spec: ModelSpec, x, roots=()) -> np.ndarray:
    """log|phi0(x) * prod(z(x) - z_k)| without overflow."""
    pre = w0_closed_form(spec)
    x = np.asarray(x, dtype=float)
    z = z_of_x(pre.form, x)
    out = -np.real(pre.w0(x))
    for r in roots:
        out = out + np.log(np.abs(z - r))
    return out


def trend_samples(spec: ModelSpec, endpoint: Endpoint, n_points: int = 11, roots=()) -> np.ndarray:
    """Geometric sequence of x values approaching an endpoint.

    Finite ends use the last decade of approach.  Infinite ends use [X/10, X]
    with X = 20 lengths (30 for the oscillators), pushed out past the image of
    the roots so that nodes of p_N do not fall inside the window.
    """
    form, _ = canonicalize(spec)
    L = form.length
    if endpoint.finite:
        t = np.geomspace(1e-2, 1e-3, n_points) * L
        sign = 1.0 if endpoint.x == form.domain[0] else -1.0
        return endpoint.x + sign * t
    X = {"shifted-osc": 30.0, "radial-osc": 30.0}.get(form.family, 20.0) * L
    lo_z, hi_z = form.z_image
    reach = 10 * (1 + max((abs(r) for r in roots), default=0.0))
    if endpoint.x > 0:
        z_far = min(reach, hi_z) if math.isfinite(hi_z) else reach
    else:
        z_far = -reach if lo_z == -math.inf else None
    if z_far is not None:
        x_far = float(np.abs(x_of_z(form, np.array([z_far]), check=False))[0])
        X = max(X, 10 * x_far) if math.isfinite(x_far) else X
    r = np.geomspace(X / 10, X, n_points)
    return r if endpoint.x > 0 else -r


_EXPECTED_TREND = {
    EndpointVerdict.DECAYING: "decreasing",
    EndpointVerdict.GROWING: "increasing",
    EndpointVerdict.POWER_DIVERGENT: "increasing",
    EndpointVerdict.BOUNDED: "flat",
}


def trend_check(spec: ModelSpec, degree: int, roots=(), flat_tol: float = 1e-3) -> list[dict]:
    """Compare each symbolic endpoint verdict against direct sampling of |phi0 p|."""
    out = []
    for e in asymptotic_endpoints(spec, degree, roots):
        v = log_modulus(spec, trend_samples(spec, e, roots=roots), roots)
        tail = np.diff(v)[len(v) // 2:]
        last = tail[-1]
        if abs(last) <= flat_tol:
            trend = "flat"
        else:
            trend = "decreasing" if last < 0 else "increasing"
        monotone = trend == "flat" or bool(np.all(np.sign(last) * tail >= -flat_tol))
        out.append(
            {
                "endpoint": e.name,
                "verdict": e.verdict.value,
                "trend": trend,
                "monotone": monotone,
                "consistent": monotone and trend == _EXPECTED_TREND[e.verdict],
            }
        )
    return out
