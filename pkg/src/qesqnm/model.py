"""Model definition: the two defining polynomials, solvability classes, validation.

Units are hbar = 2m = 1 throughout.  A model is fixed by

    P(z) = A2 z^2 + A1 z + A0      (W0'(x) z'(x) = P(z))
    Q(z) = alpha z^2 + beta z + gamma    (z'(x)^2 = Q(z))

plus the degree N of the polynomial factor of the eigenfunctions.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

FAMILIES = (
    "scarf2",
    "morse",
    "gen-poschl-teller",
    "shifted-osc",
    "radial-osc",
    "scarf1",
    "custom",
)


class ModelError(ValueError):
    """Malformed or out-of-range model input."""


class UnsupportedModelError(ModelError):
    """Model outside the generated scope (max{m, n-1} >= 3)."""


@dataclass(frozen=True)
class PolyP:
    A2: complex = 0j
    A1: complex = 0j
    A0: complex = 0j
    # coefficients of z^3, z^4, ... (only used to report higher-type models)
    higher: tuple[complex, ...] = ()

    def coeffs(self) -> np.ndarray:
        """Ascending coefficients [A0, A1, A2, ...]."""
        return np.array([self.A0, self.A1, self.A2, *self.higher], dtype=complex)

    def degree(self, zero_tol: float = 0.0) -> int:
        return _degree(self.coeffs(), zero_tol)

    def __call__(self, z):
        return self.A2 * z * z + self.A1 * z + self.A0


@dataclass(frozen=True)
class PolyQ:
    alpha: complex = 0j
    beta: complex = 0j
    gamma: complex = 0j
    higher: tuple[complex, ...] = ()

    def coeffs(self) -> np.ndarray:
        return np.array([self.gamma, self.beta, self.alpha, *self.higher], dtype=complex)

    def degree(self, zero_tol: float = 0.0) -> int:
        return _degree(self.coeffs(), zero_tol)

    def is_real(self) -> bool:
        return all(complex(c).imag == 0 for c in self.coeffs())

    def __call__(self, z):
        return self.alpha * z * z + self.beta * z + self.gamma

    def deriv(self, z):
        return 2 * self.alpha * z + self.beta


def _degree(coeffs: np.ndarray, zero_tol: float) -> int:
    nz = np.nonzero(np.abs(coeffs) > zero_tol)[0]
    return int(nz[-1]) if nz.size else -1


@dataclass(frozen=True)
class ModelSpec:
    p: PolyP
    q: PolyQ
    N: int = 0
    family: str = "custom"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ModelError(f"unknown family {self.family!r}")
        if int(self.N) != self.N or self.N < 0:
            raise ModelError(f"N must be a non-negative integer, got {self.N!r}")

    @property
    def A2(self) -> complex:
        return complex(self.p.A2)

    @property
    def A1(self) -> complex:
        return complex(self.p.A1)

    @property
    def A0(self) -> complex:
        return complex(self.p.A0)

    @property
    def alpha(self) -> complex:
        return complex(self.q.alpha)

    @property
    def beta(self) -> complex:
        return complex(self.q.beta)

    @property
    def gamma(self) -> complex:
        return complex(self.q.gamma)

    def coefficient_scale(self) -> float:
        return float(max(np.max(np.abs(self.p.coeffs())), np.max(np.abs(self.q.coeffs())), 1e-300))

    def with_N(self, N: int) -> "ModelSpec":
        return ModelSpec(self.p, self.q, N, self.family)

    # -- JSON ---------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"family": self.family}
        for key in ("A2", "A1", "A0", "alpha", "beta", "gamma"):
            d[key] = complex_to_json(getattr(self, key))
        d["N"] = int(self.N)
        if self.p.higher:
            d["P_higher"] = [complex_to_json(c) for c in self.p.higher]
        if self.q.higher:
            d["Q_higher"] = [complex_to_json(c) for c in self.q.higher]
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ModelSpec":
        if "spec" in d and isinstance(d["spec"], dict):
            d = d["spec"]
        try:
            p = PolyP(
                complex_from_json(d.get("A2", 0)),
                complex_from_json(d.get("A1", 0)),
                complex_from_json(d.get("A0", 0)),
                tuple(complex_from_json(c) for c in d.get("P_higher", ())),
            )
            q = PolyQ(
                complex_from_json(d.get("alpha", 0)),
                complex_from_json(d.get("beta", 0)),
                complex_from_json(d.get("gamma", 0)),
                tuple(complex_from_json(c) for c in d.get("Q_higher", ())),
            )
            return cls(p, q, int(d.get("N", 0)), d.get("family", "custom"))
        except (TypeError, ValueError, KeyError) as exc:
            if isinstance(exc, ModelError):
                raise
            raise ModelError(f"malformed model document: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ModelError(f"invalid JSON: {exc}") from exc


def complex_to_json(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def complex_from_json(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ModelError(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise ModelError(f"cannot read complex number from {v!r}")


# -- solvability -----------------------------------------------------------------


class Solvability(enum.Enum):
    EXACT = "ExactlySolvable"
    QES_TYPE1 = "QesType1"
    HIGHER = "HigherType"


@dataclass(frozen=True)
class SolvabilityClass:
    kind: Solvability
    m: int
    n: int

    @property
    def generated(self) -> bool:
        return self.kind is not Solvability.HIGHER


def classify_solvability(p: PolyP, q: PolyQ, zero_tol: float = 0.0) -> SolvabilityClass:
    """Classify by the degrees m = deg P, n = deg Q.

    max{m, n-1} <= 1 is exactly solvable, == 2 is type-1 QES, >= 3 is a higher
    type that is reported but never generated.
    """
    m = max(p.degree(zero_tol), 0)
    n = max(q.degree(zero_tol), 0)
    k = max(m, n - 1)
    if k <= 1:
        kind = Solvability.EXACT
    elif k == 2:
        kind = Solvability.QES_TYPE1
    else:
        kind = Solvability.HIGHER
    return SolvabilityClass(kind, m, n)


def require_generated(spec: ModelSpec) -> SolvabilityClass:
    cls = classify_solvability(spec.p, spec.q)
    if not cls.generated:
        raise UnsupportedModelError(
            f"max(m, n-1) = {max(cls.m, cls.n - 1)} >= 3: higher-type QES models are classified but not generated"
        )
    return cls


# -- validation ------------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    severity: str = "error"  # or "warning"


@dataclass
class ValidationReport:
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)

    def add(self, code: str, message: str, severity: str = "error") -> None:
        self.diagnostics.append(Diagnostic(code, message, severity))

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.valid,
            "diagnostics": [d.__dict__ for d in self.diagnostics],
        }


REALITY_TOL = 1e-9


def _is_real(z: complex, tol: float = REALITY_TOL) -> bool:
    z = complex(z)
    return abs(z.imag) <= tol * (1 + abs(z.real))


def _is_imag(z: complex, tol: float = REALITY_TOL) -> bool:
    z = complex(z)
    return abs(z.real) <= tol * (1 + abs(z.imag))


def validate_model(spec: ModelSpec, n_samples: int = 64) -> ValidationReport:
    """Structural checks, numeric reality of V(x), and per-family constraints.

    Never raises; every problem becomes a diagnostic.
    """
    from .coordinates import canonicalize
    from .spectrum import potential_terms, evaluate_terms
    from .verifier import default_window

    report = ValidationReport()
    cls = classify_solvability(spec.p, spec.q)
    if not cls.generated:
        report.add("higher-type", "max(m, n-1) >= 3 is outside the generated scope")
        return report
    if not spec.q.is_real():
        report.add("complex-q", "Q(z) must have real coefficients")
        return report
    try:
        form, cspec = canonicalize(spec)
    except ModelError as exc:
        report.add("non-canonical", str(exc))
        return report

    # numeric reality of the x-dependent part of V_N
    terms, _ = potential_terms(cspec)
    lo, hi = default_window(form)
    xs = np.linspace(lo, hi, n_samples + 2)[1:-1]
    with np.errstate(over="ignore", invalid="ignore"):
        v = evaluate_terms(form, terms, xs)
    finite = np.isfinite(v)
    bad = finite & (np.abs(v.imag) > REALITY_TOL * (1 + np.abs(v.real)))
    if np.any(bad):
        worst = [k for k, c in terms.items() if not _is_real(c)]
        report.add(
            "complex-potential",
            f"x-dependent potential has imaginary part up to {np.max(np.abs(v.imag[bad])):.3e}; "
            f"offending terms: {', '.join(worst) or 'mixed'}",
        )

    _family_constraints(spec, form, cspec, report)
    return report


def _family_constraints(spec: ModelSpec, form, cspec: ModelSpec, report: ValidationReport) -> None:
    fam = spec.family
    if fam == "custom":
        return
    expected = {
        "scarf2": "scarf2",
        "morse": "morse",
        "gen-poschl-teller": "gen-poschl-teller",
        "shifted-osc": "shifted-osc",
        "radial-osc": "radial-osc",
        "scarf1": "scarf1",
    }[fam]
    if form.family != expected:
        report.add("family-mismatch", f"Q(z) gives a {form.family} coordinate, not {fam}")
        return

    A2, A1, A0 = cspec.A2, cspec.A1, cspec.A0
    a, N = cspec.alpha.real, cspec.N
    if A2 == 0:
        return  # exact families: per-term reality is the whole constraint
    if not (_is_real(A2) or _is_imag(A2)):
        report.add("A2-phase", "A2 must be real or purely imaginary")
        return
    if _is_real(A2):
        if not all(_is_real(c) for c in (A1, A0)):
            report.add("real-A2", "real A2 forces A1 and A0 real")
        return
    # purely imaginary A2
    if fam in ("scarf2", "gen-poschl-teller"):
        if abs(2 * A1 / a - 2 * N - 1) > REALITY_TOL * (1 + abs(A1 / a)):
            report.add("qes-qnm-A1", "imaginary A2 requires 2*A1/alpha - 2N - 1 = 0")
        shifted = A0 - A2 if fam == "scarf2" else A0 + A2
        if not _is_real(shifted):
            report.add("qes-qnm-A0", "imaginary A2 requires A0 -/+ A2 real")
    elif fam == "morse":
        t = A1 / a - (N + 0.5)
        if abs(t) <= REALITY_TOL * (1 + abs(A1 / a)):
            if not _is_real(A0):
                report.add("qes-qnm-A0", "A1/alpha = N + 1/2 requires real A0")
        elif _is_imag(t):
            if A0 != 0:
                report.add("mirror-A0", "A1/alpha - (N+1/2) imaginary requires A0 = 0")
        else:
            report.add("qes-qnm-A1", "A1/alpha - (N+1/2) must vanish or be purely imaginary")
    else:
        report.add("imag-A2", f"{fam} admits no imaginary A2")
