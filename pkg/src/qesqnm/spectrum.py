"""Potential assembly, level energies, eigenfunctions and exact ladders.

For phi = exp(-W0) p(z) with p an eigenvector of the gauged operator at
eigenvalue Lambda,

    V_N(x) = F(z) - Lambda,   F = (P^2 + P Q'/2)/Q - P' - 2 A2 N z.

F is split on a fixed per-family basis of shape functions plus a constant c0,
so V_N = V(x) + C with C = c0 - Lambda, and the level energy is E = -C
(since H_N phi_N = 0 means V_N = V - E).  Time dependence is exp(-i E t):
Im E < 0 decays, Im E > 0 grows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .bethe import RootSet, qes_levels
from .coordinates import CanonicalCoordinate, canonicalize, z_of_x
from .model import REALITY_TOL, ModelError, ModelSpec, complex_to_json
from .prepotential import EndpointReport, Normalizability, Prepotential, endpoint_analysis

# shape functions of s = sqrt|alpha| x (quadratic forms) or of x (others)
_SHAPES = {
    "scarf2": {
        "cosh^2": lambda s: np.cosh(s) ** 2,
        "sinh": np.sinh,
        "sech^2": lambda s: 1 / np.cosh(s) ** 2,
        "tanh*sech": lambda s: np.tanh(s) / np.cosh(s),
    },
    "morse": {
        "exp(2s)": lambda s: np.exp(2 * s),
        "exp(s)": np.exp,
        "exp(-s)": lambda s: np.exp(-s),
        "exp(-2s)": lambda s: np.exp(-2 * s),
    },
    "gen-poschl-teller": {
        "sinh^2": lambda s: np.sinh(s) ** 2,
        "cosh": np.cosh,
        "cosech^2": lambda s: 1 / np.sinh(s) ** 2,
        "coth*cosech": lambda s: np.cosh(s) / np.sinh(s) ** 2,
    },
    "scarf1": {
        "cos^2": lambda s: np.cos(s) ** 2,
        "sin": np.sin,
        "sec^2": lambda s: 1 / np.cos(s) ** 2,
        "tan*sec": lambda s: np.sin(s) / np.cos(s) ** 2,
    },
    "shifted-osc": {f"x^{k}": (lambda k: lambda x: x**k)(k) for k in (1, 2, 3, 4)},
    "radial-osc": {
        "x^-2": lambda x: x**-2.0,
        "x^2": lambda x: x**2,
        "x^4": lambda x: x**4,
        "x^6": lambda x: x**6,
    },
}


def shape_basis(family: str) -> tuple[str, ...]:
    return tuple(_SHAPES[family])


def _split(cspec: ModelSpec, form: CanonicalCoordinate) -> tuple[np.ndarray, np.ndarray]:
    """Polynomial part g(z) (ascending, length 5) and remainder R(z) of F = g + R/Q."""
    P = cspec.p.coeffs()[:3]
    Q = np.array([cspec.gamma, cspec.beta, cspec.alpha], dtype=complex)
    Q = np.trim_zeros(Q, "b")
    dQ = npoly.polyder(Q) if len(Q) > 1 else np.zeros(1, complex)
    num = npoly.polyadd(npoly.polymul(P, P), 0.5 * npoly.polymul(P, dQ))
    quot, rem = npoly.polydiv(num, Q)
    g = np.zeros(5, dtype=complex)
    g[: len(quot)] += quot
    dP = npoly.polyder(P)
    g[: len(dP)] -= dP
    g[1] -= 2 * cspec.A2 * cspec.N
    r = np.zeros(2, dtype=complex)
    r[: len(rem)] = rem
    return g, r


def potential_terms(cspec: ModelSpec, form: CanonicalCoordinate | None = None) -> tuple[dict[str, complex], complex]:
    """Shape-function coefficients of the x-dependent potential and the constant c0.

    ``cspec`` must already be in canonical coordinates.
    """
    if form is None:
        form, cspec = canonicalize(cspec)
    g, r = _split(cspec, form)
    fam = form.family
    a = form.alpha
    if fam == "scarf2":
        terms = {"cosh^2": g[2], "sinh": g[1], "sech^2": r[0] / a, "tanh*sech": r[1] / a}
        c0 = g[0] - g[2]
    elif fam == "morse":
        terms = {"exp(2s)": g[2], "exp(s)": g[1], "exp(-s)": r[1] / a, "exp(-2s)": r[0] / a}
        c0 = g[0]
    elif fam == "gen-poschl-teller":
        terms = {"sinh^2": g[2], "cosh": g[1], "cosech^2": r[0] / a, "coth*cosech": r[1] / a}
        c0 = g[0] + g[2]
    elif fam == "scarf1":
        terms = {"cos^2": -g[2], "sin": g[1], "sec^2": -r[0] / a, "tan*sec": -r[1] / a}
        c0 = g[0] + g[2]
    elif fam == "shifted-osc":
        rg = math.sqrt(form.gamma)
        terms = {f"x^{k}": g[k] * rg**k for k in (1, 2, 3, 4)}
        c0 = g[0]
    else:
        q = form.beta / 4
        terms = {"x^-2": r[0] / form.beta / q, "x^2": g[1] * q, "x^4": g[2] * q**2, "x^6": g[3] * q**3}
        c0 = g[0]
    return {k: complex(v) for k, v in terms.items()}, complex(c0)


def evaluate_terms(form: CanonicalCoordinate, terms: dict[str, complex], x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    arg = form.rate * x if form.kind == "quadratic" else x
    shapes = _SHAPES[form.family]
    out = np.zeros(x.shape, dtype=complex)
    for name, c in terms.items():
        if c != 0:
            out = out + c * shapes[name](arg)
    return out


# -- assembly ------------------------------------------------------------------------


@dataclass
class PotentialAssembly:
    form: CanonicalCoordinate
    terms: dict[str, complex]
    constant: complex  # C, with V_N(x) = V(x) + C
    diagnostics: list[str] = field(default_factory=list)

    def V(self, x) -> np.ndarray:
        """x-dependent part (complex dtype; real for valid models)."""
        return evaluate_terms(self.form, self.terms, x)

    def V_N(self, x) -> np.ndarray:
        return self.V(x) + self.constant

    def to_dict(self) -> dict:
        return {
            "family": self.form.family,
            "terms": {k: complex_to_json(v) for k, v in self.terms.items()},
            "constant": complex_to_json(self.constant),
            "diagnostics": list(self.diagnostics),
        }


def assemble_potential(spec: ModelSpec, level: RootSet | None = None, n_samples: int = 64) -> PotentialAssembly:
    form, cspec = canonicalize(spec)
    terms, c0 = potential_terms(cspec, form)
    lam = level.lam if level is not None else 0j
    asm = PotentialAssembly(form, terms, c0 - lam)
    from .verifier import default_window

    lo, hi = default_window(form)
    xs = np.linspace(lo, hi, n_samples + 2)[1:-1]
    with np.errstate(over="ignore", invalid="ignore"):
        v = asm.V(xs)
    ok = np.isfinite(v)
    leak = np.abs(v.imag[ok]) > REALITY_TOL * (1 + np.abs(v.real[ok]))
    if np.any(leak):
        bad = [k for k, c in terms.items() if abs(c.imag) > REALITY_TOL * (1 + abs(c.real))]
        asm.diagnostics.append(f"imaginary part in x-dependent potential; offending terms: {', '.join(bad) or 'mixed'}")
    return asm


def level_energy(spec: ModelSpec, level: RootSet) -> complex:
    _, cspec = canonicalize(spec)
    _, c0 = potential_terms(cspec)
    return complex(level.lam - c0)


# -- eigenfunctions -------------------------------------------------------------------


@dataclass(frozen=True)
class Eigenfunction:
    """phi(x) = exp(-W0(x)) prod_k (z(x) - z_k), unnormalized."""

    prepotential: Prepotential
    roots: tuple[complex, ...]

    def log(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        z = z_of_x(self.prepotential.form, x)
        out = -np.asarray(self.prepotential.w0(x), dtype=complex)
        with np.errstate(divide="ignore"):
            for r in self.roots:
                out = out + np.log((z - r).astype(complex))
        return out

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        z = z_of_x(self.prepotential.form, x)
        out = np.exp(-np.asarray(self.prepotential.w0(x), dtype=complex))
        for r in self.roots:
            out = out * (z - r)
        return out

    def scaled(self, x) -> np.ndarray:
        """phi divided by a constant so that max|phi| = 1 on x (overflow safe)."""
        lg = self.log(x)
        return np.exp(lg - np.max(lg.real))


def eigenfunction(spec: ModelSpec, level: RootSet) -> Eigenfunction:
    form, cspec = canonicalize(spec)
    return Eigenfunction(Prepotential(form, cspec), tuple(complex(r) for r in level.roots))


# -- levels and mode classes ------------------------------------------------------------


class ModeClass(enum.Enum):
    BOUND = "BoundState"
    DECAYING_QNM = "DecayingQNM"
    GROWING_QNM = "GrowingQNM"
    NON_NORMALIZABLE = "NonNormalizable"


def mode_class(verdict: Normalizability, energy: complex, tol: float = 1e-9) -> ModeClass:
    real = abs(energy.imag) <= tol * (1 + abs(energy.real))
    if verdict is Normalizability.NON_NORMALIZABLE:
        return ModeClass.NON_NORMALIZABLE
    if verdict is Normalizability.NORMALIZABLE and real:
        return ModeClass.BOUND
    if real:
        return ModeClass.NON_NORMALIZABLE
    return ModeClass.DECAYING_QNM if energy.imag < 0 else ModeClass.GROWING_QNM


@dataclass
class SpectralLevel:
    n: int
    energy: complex
    level: RootSet
    endpoints: EndpointReport
    mode: ModeClass
    phi: Eigenfunction

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "E": complex_to_json(self.energy),
            "mode_class": self.mode.value,
            "verdict": self.endpoints.verdict.value,
            "roots": [complex_to_json(r) for r in self.level.roots],
            "lambda": complex_to_json(self.level.lam),
            "residual_max": self.level.residual_max,
            "flags": list(self.level.flags),
        }


def spectral_levels(spec: ModelSpec) -> list[SpectralLevel]:
    """All N+1 levels with energies, eigenfunctions and mode classes.

    Exactly solvable models are indexed by polynomial degree (the ladder
    index); QES models by the (Re Lambda, Im Lambda) order.
    """
    form, cspec = canonicalize(spec)
    _, c0 = potential_terms(cspec, form)
    pre = Prepotential(form, cspec)
    levels = qes_levels(spec)
    exact = cspec.A2 == 0
    out = []
    for i, lv in enumerate(levels):
        E = complex(lv.lam - c0)
        rep = endpoint_analysis(spec, lv.degree, energy=E, roots=lv.roots)
        n = lv.ladder_index if exact else i
        out.append(SpectralLevel(n, E, lv, rep, mode_class(rep.verdict, E), Eigenfunction(pre, tuple(lv.roots))))
    out.sort(key=lambda s: s.n)
    return out


# -- exact ladders ---------------------------------------------------------------------


@dataclass
class ExactLadder:
    energies: np.ndarray
    beyond_turnover: np.ndarray  # n > A1/alpha for real ladders: the parabola has turned over
    notes: list[str] = field(default_factory=list)


def exact_spectrum(spec: ModelSpec, n_max: int) -> ExactLadder:
    """Closed-form ladder E_0..E_{n_max} of an exactly solvable (A2 = 0) model.

    quadratic Q:  E_n = 2 A1 n - alpha n^2 - A1^2/alpha
    constant Q:   E_n = 2 A1 (n + 1/2) - A0^2/gamma
    linear Q:     E_n = A1 (2n + 1/2 - 2 A0/beta)
    (coefficients in the canonical variable).
    """
    form, c = canonicalize(spec)
    if c.A2 != 0:
        raise ModelError("exact ladders exist only for A2 = 0")
    n = np.arange(n_max + 1)
    A1, A0 = c.A1, c.A0
    notes = []
    if form.kind == "quadratic":
        a = form.alpha
        E = 2 * A1 * n - a * n**2 - A1**2 / a
        r = A1 / a
        # only a real ladder has a bound-state range to turn over from
        beyond = (n > r.real) if abs(r.imag) <= 1e-12 * (1 + abs(r)) else np.zeros(n.shape, bool)
        if form.family in ("scarf2", "gen-poschl-teller"):
            notes.append("Scarf II and generalized Poschl-Teller share this ladder; the potentials differ")
    elif form.kind == "constant":
        E = 2 * A1 * (n + 0.5) - A0**2 / form.gamma
        beyond = np.zeros(n.shape, bool)
    else:
        E = A1 * (2 * n + 0.5 - 2 * A0 / form.beta)
        beyond = np.zeros(n.shape, bool)
    if np.any(beyond):
        notes.append("levels past n = A1/alpha lie beyond the bound-state range")
    return ExactLadder(np.asarray(E, dtype=complex), beyond, notes)


# -- serialization ---------------------------------------------------------------------


def spectral_document(spec: ModelSpec, levels: list[SpectralLevel] | None = None) -> dict:
    levels = spectral_levels(spec) if levels is None else levels
    asm = assemble_potential(spec)
    return {
        "levels": [lv.to_dict() for lv in levels],
        "potential_terms": {k: complex_to_json(v) for k, v in asm.terms.items()},
    }


def grid_csv_rows(spec: ModelSpec, level: SpectralLevel, x) -> np.ndarray:
    """Columns x, V(x), Re phi, Im phi (phi scaled to max modulus 1)."""
    asm = assemble_potential(spec)
    x = np.asarray(x, dtype=float)
    v = asm.V(x).real
    phi = level.phi.scaled(x)
    return np.column_stack([x, v, phi.real, phi.imag])
