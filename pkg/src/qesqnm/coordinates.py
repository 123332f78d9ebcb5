"""The three canonical sinusoidal coordinates z(x) with z'(x)^2 = Q(z).

Canonical forms (positive branch, integration constant as in the standard
closed forms):

    constant   Q = gamma > 0            z = sqrt(gamma) x          x in R
    linear     Q = beta z, beta > 0     z = beta x^2 / 4           x > 0
    quadratic  Q = alpha (z^2 + delta)
        alpha > 0, delta = +1           z = sinh(sqrt(alpha) x)    x in R     (Scarf II)
        alpha > 0, delta =  0           z = exp(sqrt(alpha) x)     x in R     (Morse)
        alpha > 0, delta = -1           z = cosh(sqrt(alpha) x)    x > 0      (gen. Poschl-Teller)
        alpha < 0, delta = -1           z = sin(sqrt(-alpha) x)    |sqrt(-alpha) x| < pi/2  (Scarf I)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelError, ModelSpec, PolyP, PolyQ, require_generated


class DomainError(ModelError):
    """Evaluation outside the open domain of a coordinate."""


@dataclass(frozen=True)
class CanonicalCoordinate:
    kind: str  # "constant" | "linear" | "quadratic"
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: int = 0
    # z_original = scale * z_canonical + shift
    shift: float = 0.0
    scale: float = 1.0

    @property
    def family(self) -> str:
        if self.kind == "constant":
            return "shifted-osc"
        if self.kind == "linear":
            return "radial-osc"
        if self.alpha < 0:
            return "scarf1"
        return {1: "scarf2", 0: "morse", -1: "gen-poschl-teller"}[self.delta]

    @property
    def rate(self) -> float:
        """sqrt|alpha| for quadratic forms; 1 otherwise."""
        return math.sqrt(abs(self.alpha)) if self.kind == "quadratic" else 1.0

    @property
    def length(self) -> float:
        return 1.0 / self.rate

    @property
    def domain(self) -> tuple[float, float]:
        fam = self.family
        if fam in ("shifted-osc", "scarf2", "morse"):
            return (-math.inf, math.inf)
        if fam in ("radial-osc", "gen-poschl-teller"):
            return (0.0, math.inf)
        h = math.pi / (2 * self.rate)
        return (-h, h)

    @property
    def z_image(self) -> tuple[float, float]:
        return {
            "shifted-osc": (-math.inf, math.inf),
            "scarf2": (-math.inf, math.inf),
            "morse": (0.0, math.inf),
            "radial-osc": (0.0, math.inf),
            "gen-poschl-teller": (1.0, math.inf),
            "scarf1": (-1.0, 1.0),
        }[self.family]

    def Q(self, z):
        return self.alpha * z * z + self.beta * z + self.gamma

    def polyq(self) -> PolyQ:
        return PolyQ(complex(self.alpha), complex(self.beta), complex(self.gamma))


def canonical_coordinate(q: PolyQ) -> CanonicalCoordinate:
    """Reduce a real Q of degree <= 2 to one of the canonical forms.

    A non-canonical Q is brought to canonical form by z = scale*u + shift; the
    returned coordinate records that affine map (see ``canonicalize`` for the
    matching transformation of P).
    """
    if q.higher and any(c != 0 for c in q.higher):
        raise ModelError("Q of degree > 2 is not a sinusoidal coordinate")
    if not q.is_real():
        raise ModelError("Q must be real")
    a, b, g = (complex(c).real for c in (q.alpha, q.beta, q.gamma))
    if a == 0 and b == 0 and g == 0:
        raise ModelError("Q is identically zero")
    if a == 0 and b == 0:
        if g < 0:
            raise ModelError("Q = gamma < 0 gives no real coordinate")
        return CanonicalCoordinate("constant", gamma=g)
    if a == 0:
        if g == 0 and b > 0:
            return CanonicalCoordinate("linear", beta=b)
        s = 1.0 if b > 0 else -1.0
        return CanonicalCoordinate("linear", beta=abs(b), shift=-g / b, scale=s)
    shift = -b / (2 * a)
    rest = g - b * b / (4 * a)
    dprime = rest / a
    if dprime == 0:
        delta, s = 0, 1.0
    else:
        delta = 1 if dprime > 0 else -1
        s = math.sqrt(abs(dprime))
    if a < 0 and delta != -1:
        raise ModelError("alpha < 0 requires the delta = -1 form (otherwise Q <= 0 everywhere)")
    return CanonicalCoordinate("quadratic", alpha=a, beta=0.0, gamma=a * delta, delta=delta, shift=shift, scale=s)


def canonicalize(spec: ModelSpec) -> tuple[CanonicalCoordinate, ModelSpec]:
    """Canonical coordinate plus the spec rewritten in the canonical variable u.

    With z = s u + t, Q~(u) = Q(s u + t)/s^2 and P~(u) = P(s u + t)/s; W0 is
    unchanged.
    """
    require_generated(spec)
    form = canonical_coordinate(spec.q)
    s, t = form.scale, form.shift
    if s == 1.0 and t == 0.0:
        return form, ModelSpec(spec.p, form.polyq(), spec.N, spec.family)
    A2, A1, A0 = spec.A2, spec.A1, spec.A0
    p = PolyP(A2 * s, 2 * A2 * t + A1, (A2 * t * t + A1 * t + A0) / s)
    return form, ModelSpec(p, form.polyq(), spec.N, spec.family)


def _check_open(form: CanonicalCoordinate, x: np.ndarray) -> None:
    lo, hi = form.domain
    if np.any(~np.isfinite(x)) or np.any(x <= lo) or np.any(x >= hi):
        raise DomainError(f"x outside the open domain ({lo}, {hi}) of the {form.family} coordinate")


def z_of_x(form: CanonicalCoordinate, x, check: bool = True):
    x = np.asarray(x, dtype=float)
    if check:
        _check_open(form, x)
    r = form.rate
    fam = form.family
    if fam == "shifted-osc":
        z = math.sqrt(form.gamma) * x
    elif fam == "radial-osc":
        z = form.beta * x * x / 4
    elif fam == "scarf2":
        z = np.sinh(r * x)
    elif fam == "morse":
        z = np.exp(r * x)
    elif fam == "gen-poschl-teller":
        z = np.cosh(r * x)
    else:
        z = np.sin(r * x)
    return z


def dz_dx(form: CanonicalCoordinate, x):
    """Analytic z'(x); equals +sqrt(Q(z(x))) on the domain."""
    x = np.asarray(x, dtype=float)
    r = form.rate
    fam = form.family
    if fam == "shifted-osc":
        return math.sqrt(form.gamma) * np.ones_like(x)
    if fam == "radial-osc":
        return form.beta * x / 2
    if fam == "scarf2":
        return r * np.cosh(r * x)
    if fam == "morse":
        return r * np.exp(r * x)
    if fam == "gen-poschl-teller":
        return r * np.sinh(r * x)
    return r * np.cos(r * x)


def x_of_z(form: CanonicalCoordinate, z, check: bool = True):
    z = np.asarray(z, dtype=float)
    lo, hi = form.z_image
    if check and (np.any(~np.isfinite(z)) or np.any(z <= lo) or np.any(z >= hi)):
        raise DomainError(f"z outside the image ({lo}, {hi}) of the {form.family} coordinate")
    r = form.rate
    fam = form.family
    if fam == "shifted-osc":
        return z / math.sqrt(form.gamma)
    if fam == "radial-osc":
        return 2 * np.sqrt(z / form.beta)
    if fam == "scarf2":
        return np.arcsinh(z) / r
    if fam == "morse":
        return np.log(z) / r
    if fam == "gen-poschl-teller":
        return np.arccosh(z) / r
    return np.arcsin(z) / r
