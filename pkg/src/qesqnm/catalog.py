"""Named presets: coefficient maps, parameter schemas, expected verdicts, closed-form energies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .model import ModelError, ModelSpec, PolyP, PolyQ, Solvability


class PresetError(ModelError):
    """Unknown preset or parameter outside its schema."""


@dataclass(frozen=True)
class Param:
    default: float
    check: Callable[[float, int], bool] = lambda v, N: True
    constraint: str = "real"
    sample: tuple[float, float] = (0.5, 2.0)  # range for random draws (magnitude for 'nonzero')
    nonzero: bool = False

    def draw(self, rng: np.random.Generator) -> float:
        v = rng.uniform(*self.sample)
        if self.nonzero:
            v *= rng.choice([-1.0, 1.0])
        return float(v)


@dataclass(frozen=True)
class Expected:
    solvability: Solvability
    normalizability: str  # Normalizable | NonNormalizable | QnmOutgoing
    real_energies: bool | None  # None: not asserted


@dataclass(frozen=True)
class Preset:
    id: str
    family: str
    citation: str
    params: dict[str, Param]
    build: Callable[[dict, int], tuple[PolyP, PolyQ]]
    expected: Callable[[dict, int], Expected]
    # closed-form energy: (params, N, level index n, root sum) -> E
    energy: Callable[[dict, int, int, complex], complex]
    # the parameter the reality/family constraints pin, and how to nudge it
    perturb: Callable[[dict, int], tuple[PolyP, PolyQ]]
    fixed: dict[str, float] = field(default_factory=dict)
    # constraint coupling several parameters: (description, predicate(params, N))
    joint: tuple[str, Callable[[dict, int], bool]] | None = None

    def resolve(self, params: dict | None, N: int) -> dict:
        params = dict(params or {})
        unknown = set(params) - set(self.params)
        if unknown:
            raise PresetError(f"{self.id}: unknown parameter(s) {sorted(unknown)}; expected {sorted(self.params)}")
        out = {k: float(params.get(k, p.default)) for k, p in self.params.items()}
        for k, p in self.params.items():
            if not math.isfinite(out[k]) or not p.check(out[k], N):
                raise PresetError(f"{self.id}: parameter {k}={out[k]!r} violates constraint '{p.constraint}'")
        if self.joint and not self.joint[1](out, N):
            raise PresetError(f"{self.id}: parameters {out} violate constraint '{self.joint[0]}'")
        return out

    def schema(self) -> dict:
        out = {k: {"default": p.default, "constraint": p.constraint} for k, p in self.params.items()}
        if self.joint:
            out["joint"] = {"constraint": self.joint[0]}
        return out

    def random_params(self, rng: np.random.Generator, N: int, tries: int = 1000) -> dict:
        for _ in range(tries):
            draw = {k: p.draw(rng) for k, p in self.params.items()}
            try:
                return self.resolve(draw, N)
            except PresetError:
                continue
        raise RuntimeError(f"no in-range draw for {self.id}")

    def instantiate(self, params: dict | None = None, N: int = 0) -> ModelSpec:
        if int(N) != N or N < 0:
            raise PresetError("N must be a non-negative integer")
        p = self.resolve(params, N)
        P, Q = self.build(p, N)
        return ModelSpec(P, Q, int(N), self.family)

    def perturbed(self, params: dict | None = None, N: int = 0) -> ModelSpec:
        p = self.resolve(params, N)
        P, Q = self.perturb(p, N)
        return ModelSpec(P, Q, int(N), self.family)

    def to_dict(self) -> dict:
        return {"id": self.id, "family": self.family, "citation": self.citation, "schema": self.schema()}


EPS = 1e-3


def _pos(name: str = "> 0") -> Param:
    return Param(1.0, lambda v, N: v > 0, name)


def _nz(default: float = 1.0) -> Param:
    return Param(default, lambda v, N: v != 0, "real, nonzero", (0.5, 2.0), True)


def _real(default: float, lo: float = -2.0, hi: float = 2.0) -> Param:
    return Param(default, lambda v, N: True, "real", (lo, hi))


def _nudge(P: PolyP, **kw) -> PolyP:
    d = {"A2": P.A2, "A1": P.A1, "A0": P.A0}
    for k, v in kw.items():
        d[k] = d[k] + v
    return PolyP(d["A2"], d["A1"], d["A0"])


def _with(build, **kw):
    def f(p, N):
        P, Q = build(p, N)
        return _nudge(P, **kw), Q

    return f


def _quad(alpha: float) -> PolyQ:
    return PolyQ(alpha, 0.0, alpha)


def _exact_ladder(A1: complex, alpha: float, n: int) -> complex:
    return 2 * A1 * n - alpha * n * n - A1 * A1 / alpha


def _E(kind: Solvability, norm: str, real: bool | None) -> Expected:
    return Expected(kind, norm, real)


EX, QES = Solvability.EXACT, Solvability.QES_TYPE1
NORM, NON, QNM = "Normalizable", "NonNormalizable", "QnmOutgoing"


# --- Scarf II -----------------------------------------------------------------------------


def _scarf2_exact(p, N):
    return PolyP(0, p["A1"], p["A0"]), _quad(p["alpha"])


def _scarf2_qnm(p, N):
    a = p["alpha"]
    return PolyP(0, -(1j * p["c"] + a) / 2, -1j * p["d"] / 2), _quad(a)


def _scarf2_qes_qnm(p, N):
    a, c = p["alpha"], p["c"]
    return PolyP(1j * c, a * (N + 0.5), 1j * c + p["a"] * a), _quad(a)


def _scarf2_singular(p, N):
    a, c = p["alpha"], p["c"]
    return PolyP(1j * c, a * (N + 0.5), 1j * c), _quad(a)


def _scarf2_real(p, N):
    return PolyP(p["A2"], p["A1"], p["A0"]), _quad(p["alpha"])


# --- Morse ----------------------------------------------------------------------------------


def _morse_q(alpha):
    return PolyQ(alpha, 0.0, 0.0)


def _morse_exact(p, N):
    return PolyP(0, p["A1"], p["A0"]), _morse_q(p["alpha"])


def _morse_qnm(p, N):
    a = p["alpha"]
    return PolyP(0, -a * (1 + 1j * p["d"]) / 2, 1j * p["c"]), _morse_q(a)


def _morse_qes_real(p, N):
    return PolyP(p["A2"], p["A1"], p["A0"]), _morse_q(p["alpha"])


def _morse_qes_qnm(p, N):
    a = p["alpha"]
    return PolyP(-0.5j * p["b"], (N + 0.5) * a, -p["d"] / 2), _morse_q(a)


def _morse_mirror(p, N):
    a = p["alpha"]
    return PolyP(-1j * p["c"], a * (0.5j * p["d"] + N + 0.5), 0), _morse_q(a)


# --- generalized Poschl-Teller ----------------------------------------------------------------


def _pt_q(alpha):
    return PolyQ(alpha, 0.0, -alpha)


def _genpt_exact(p, N):
    return PolyP(0, p["A1"], p["A0"]), _pt_q(p["alpha"])


def _genpt_qnm(p, N):
    a = p["alpha"]
    return PolyP(0, -(1j * p["c"] + a) / 2, -1j * p["d"] / 2), _pt_q(a)


def _genpt_qes_real(p, N):
    return PolyP(p["A2"], p["A1"], p["A0"]), _pt_q(p["alpha"])


def _genpt_qes_qnm(p, N):
    a, c = p["alpha"], p["c"]
    return PolyP(1j * c, a * (N + 0.5), -p["a"] * a - 1j * c), _pt_q(a)


# --- oscillators and Scarf I ------------------------------------------------------------------


def _shifted(p, N):
    return PolyP(p["A2"], p["A1"], p["A0"]), PolyQ(0, 0, p["gamma"])


def _shifted_qnm(p, N):
    return PolyP(0, -0.5j * p["c"], 0), PolyQ(0, 0, p["gamma"])


def _radial(p, N):
    return PolyP(0, p["A1"], p["A0"]), PolyQ(0, 4.0, 0)


def _sextic(p, N):
    return PolyP(2 * p["a"], 2 * p["b"], 0), PolyQ(0, 4.0, 0)


def _radial_qnm(p, N):
    return PolyP(0, -2j * p["a"], -2 * p["gamma"]), PolyQ(0, 4.0, 0)


def _scarf1(p, N):
    a = p["a"]
    return PolyP(p["A2"], p["A1"], p["A0"]), PolyQ(-a, 0.0, a)


_PRESETS: list[Preset] = [
    Preset(
        "scarf2-exact", "scarf2", "Scarf II, real exactly solvable ladder",
        {"alpha": _pos(), "A1": Param(2.7, lambda v, N: v > 0, "> 0", (0.5, 5.0)), "A0": _real(0.4)},
        _scarf2_exact,
        lambda p, N: _E(EX, NORM if N < p["A1"] / p["alpha"] else NON, True),
        lambda p, N, n, s: _exact_ladder(p["A1"], p["alpha"], n),
        _with(_scarf2_exact, A1=EPS * 1j),
    ),
    Preset(
        "scarf2-qnm", "scarf2", "Scarf II, exactly solvable hyperbolic QNM ladder",
        {"alpha": _pos(), "c": _nz(2.0), "d": _real(0.0)},
        _scarf2_qnm,
        lambda p, N: _E(EX, QNM, False),
        lambda p, N, n, s: p["c"] ** 2 / (4 * p["alpha"]) - (n + 0.5) ** 2 * p["alpha"] - 1j * p["c"] * (n + 0.5),
        _with(_scarf2_qnm, A1=EPS),
    ),
    Preset(
        "scarf2-qes-qnm", "scarf2", "Scarf II, QES model with QNMs (A2 = ic, A0 - A2 = a alpha)",
        {"alpha": _pos(), "c": _nz(1.0), "a": _nz(1.0)},
        _scarf2_qes_qnm,
        lambda p, N: _E(QES, QNM, False),
        lambda p, N, n, s: -p["alpha"] / 4 - 2j * p["c"] * p["a"] + 2j * p["c"] * s,
        _with(_scarf2_qes_qnm, A1=EPS),
    ),
    Preset(
        "scarf2-singular", "scarf2", "Scarf II, singular QES model with real energies (A2 = A0 = ic)",
        {"alpha": _pos(), "c": _nz(1.0)},
        _scarf2_singular,
        lambda p, N: _E(QES, NORM, True),
        lambda p, N, n, s: -p["alpha"] / 4 + 2j * p["c"] * s,
        _with(_scarf2_singular, A1=EPS),
    ),
    Preset(
        "scarf2-qes-real-none", "scarf2", "Scarf II with real A2: not normalizable on the line",
        {"alpha": _pos(), "A2": _nz(0.5), "A1": _real(1.5, 0.5, 3.0), "A0": _real(0.3)},
        _scarf2_real,
        lambda p, N: _E(QES, NON, None),
        lambda p, N, n, s: (2 * p["A1"] * N - p["alpha"] * N**2 - p["A1"] ** 2 / p["alpha"]
                            - 2 * p["A2"] * (p["A0"] - p["A2"]) / p["alpha"] + 2 * p["A2"] * s),
        _with(_scarf2_real, A2=EPS * 1j),
    ),
    Preset(
        "morse-exact", "morse", "Morse, real exactly solvable ladder",
        {"alpha": _pos(), "A1": Param(3.3, lambda v, N: v > 0, "> 0", (0.5, 5.0)),
         "A0": Param(-1.0, lambda v, N: v < 0, "< 0", (-3.0, -0.2))},
        _morse_exact,
        lambda p, N: _E(EX, NORM if N < p["A1"] / p["alpha"] else NON, True),
        lambda p, N, n, s: _exact_ladder(p["A1"], p["alpha"], n),
        _with(_morse_exact, A1=EPS * 1j),
    ),
    Preset(
        "morse-qnm", "morse", "Morse, exactly solvable QNM ladder (A0 = ic)",
        {"alpha": _pos(), "c": _nz(1.0), "d": Param(2.0, lambda v, N: True, "real", (0.2, 3.0))},
        _morse_qnm,
        lambda p, N: _E(EX, QNM, False) if p["d"] != 0 else _E(EX, NON, True),
        lambda p, N, n, s: p["alpha"] * ((p["d"] ** 2 - 1) / 4 - n * n - n - 1j * p["d"] * (n + 0.5)),
        _with(_morse_qnm, A1=EPS),
    ),
    Preset(
        "morse-qes-real", "morse", "Morse, QES model with real energies (A2 > 0, A0 < 0)",
        {"alpha": _pos(), "A2": Param(1.0, lambda v, N: v > 0, "> 0", (0.2, 2.0)),
         "A1": _real(1.0), "A0": Param(-1.0, lambda v, N: v < 0, "< 0", (-2.0, -0.2))},
        _morse_qes_real,
        lambda p, N: _E(QES, NORM, True),
        lambda p, N, n, s: (2 * p["A1"] * N - p["alpha"] * N**2 - p["A1"] ** 2 / p["alpha"]
                            - 2 * p["A2"] * p["A0"] / p["alpha"] + 2 * p["A2"] * s),
        _with(_morse_qes_real, A2=EPS * 1j),
    ),
    Preset(
        "morse-qes-qnm", "morse", "Morse, QES model with QNMs (A2 = -ib/2, A1 = (N + 1/2) alpha)",
        {"alpha": _pos(), "b": _nz(1.0), "d": Param(1.0, lambda v, N: v > 0, "> 0", (0.2, 3.0))},
        _morse_qes_qnm,
        lambda p, N: _E(QES, QNM, False),
        lambda p, N, n, s: -p["alpha"] / 4 - 1j * p["b"] * p["d"] / (2 * p["alpha"]) - 1j * p["b"] * s,
        _with(_morse_qes_qnm, A1=EPS),
    ),
    Preset(
        "morse-qnm-mirror", "morse", "Morse, parity mirror of the exact QNM ladder (A2 = -ic, A0 = 0)",
        {"alpha": _pos(), "c": _nz(1.0), "d": Param(2.0, lambda v, N: True, "real", (0.2, 3.0))},
        _morse_mirror,
        lambda p, N: _E(QES, QNM, False) if p["d"] != 0 else _E(QES, NON, True),
        lambda p, N, n, s: p["alpha"] * ((p["d"] ** 2 - 1) / 4 - 0.5j * p["d"]) - 2j * p["c"] * s,
        _with(_morse_mirror, A1=EPS),
    ),
    Preset(
        "genpt-exact", "gen-poschl-teller", "generalized Poschl-Teller, real exactly solvable ladder",
        {"alpha": _pos(), "A1": Param(2.3, lambda v, N: v > 0, "> 0", (0.5, 4.0)),
         "A0": Param(-4.0, lambda v, N: True, "real", (-6.0, -1.0))},
        _genpt_exact,
        lambda p, N: _E(EX, NORM if (N < p["A1"] / p["alpha"] and p["A0"] + p["A1"] < 0) else NON, True),
        lambda p, N, n, s: _exact_ladder(p["A1"], p["alpha"], n),
        _with(_genpt_exact, A1=EPS * 1j),
    ),
    Preset(
        "genpt-qnm", "gen-poschl-teller", "generalized Poschl-Teller, exactly solvable hyperbolic QNM ladder",
        {"alpha": _pos(), "c": _nz(2.0), "d": _real(1.0)},
        _genpt_qnm,
        lambda p, N: _E(EX, QNM, False),
        lambda p, N, n, s: p["c"] ** 2 / (4 * p["alpha"]) - (n + 0.5) ** 2 * p["alpha"] - 1j * p["c"] * (n + 0.5),
        _with(_genpt_qnm, A1=EPS),
    ),
    Preset(
        "genpt-qes-real", "gen-poschl-teller", "generalized Poschl-Teller, QES with real energies (A2 + A1 + A0 < 0)",
        {"alpha": _pos(), "A2": Param(1.0, lambda v, N: v > 0, "> 0", (0.2, 2.0)), "A1": _real(1.0),
         "A0": Param(-4.0, lambda v, N: True, "real", (-6.0, -1.0))},
        _genpt_qes_real,
        lambda p, N: _E(QES, NORM, True),
        lambda p, N, n, s: (2 * p["A1"] * N - p["alpha"] * N**2 - p["A1"] ** 2 / p["alpha"]
                            - 2 * p["A2"] * (p["A0"] + p["A2"]) / p["alpha"] + 2 * p["A2"] * s),
        _with(_genpt_qes_real, A2=EPS * 1j),
        joint=("A2 + A1 + A0 < 0", lambda p, N: p["A2"] + p["A1"] + p["A0"] < 0),
    ),
    Preset(
        "genpt-qes-qnm", "gen-poschl-teller", "generalized Poschl-Teller, QES model with QNMs (a > N + 1/2)",
        {"alpha": _pos(), "c": _nz(1.0),
         "a": Param(4.0, lambda v, N: v > N + 0.5, "a > N + 1/2", (0.5, 10.0))},
        _genpt_qes_qnm,
        lambda p, N: _E(QES, QNM, False),
        lambda p, N, n, s: -p["alpha"] / 4 + 2j * p["c"] * p["a"] + 2j * p["c"] * s,
        _with(_genpt_qes_qnm, A1=EPS),
    ),
    Preset(
        "shifted-osc", "shifted-osc", "shifted oscillator: no QES for A2 != 0",
        {"gamma": _pos(), "A2": _real(0.5), "A1": Param(1.0, lambda v, N: v > 0, "> 0", (0.5, 2.0)),
         "A0": _real(0.3)},
        _shifted,
        lambda p, N: _E(QES, NON, None) if p["A2"] != 0 else _E(EX, NORM, True),
        lambda p, N, n, s: 2 * p["A1"] * (N + 0.5) - p["A0"] ** 2 / p["gamma"] + 2 * p["A2"] * s,
        lambda p, N: _with(_shifted, **({"A2": EPS * 1j} if p["A2"] != 0 else {"A1": EPS * 1j}))(p, N),
    ),
    Preset(
        "shifted-osc-qnm", "shifted-osc", "inverted oscillator, exactly solvable QNM ladder",
        {"gamma": _pos(), "c": _nz(2.0)},
        _shifted_qnm,
        lambda p, N: _E(EX, QNM, False),
        lambda p, N, n, s: -1j * p["c"] * (n + 0.5),
        _with(_shifted_qnm, A1=EPS),
    ),
    Preset(
        "radial-osc", "radial-osc", "radial oscillator, real exactly solvable ladder",
        {"A1": Param(1.0, lambda v, N: v > 0, "> 0", (0.5, 3.0)),
         "A0": Param(-4.0, lambda v, N: v <= 0, "<= 0", (-6.0, -0.5))},
        _radial,
        lambda p, N: _E(EX, NORM, True),
        lambda p, N, n, s: p["A1"] * (2 * n + 0.5 - p["A0"] / 2),
        _with(_radial, A1=EPS * 1j),
    ),
    Preset(
        "sextic-qes", "radial-osc", "sextic oscillator QES model (A2 = 2a, A1 = 2b, A0 = 0)",
        {"a": Param(1.0, lambda v, N: v > 0, "> 0", (0.3, 2.0)), "b": _real(1.0)},
        _sextic,
        lambda p, N: _E(QES, NORM, True),
        lambda p, N, n, s: (4 * N + 1) * p["b"] + 4 * p["a"] * s,
        _with(_sextic, A2=EPS * 1j),
    ),
    Preset(
        "radial-osc-qnm", "radial-osc", "inverted radial oscillator, exactly solvable QNM ladder",
        {"a": _nz(1.0), "gamma": Param(1.5, lambda v, N: v > 0, "> 0", (0.3, 3.0))},
        _radial_qnm,
        lambda p, N: _E(EX, QNM, False),
        lambda p, N, n, s: -1j * p["a"] * (4 * n + 2 * p["gamma"] + 1),
        _with(_radial_qnm, A1=EPS),
    ),
    Preset(
        "scarf1", "scarf1", "Scarf I on a finite interval: no QNMs; A2 != 0 claimed not normalizable",
        {"a": _pos(), "A2": _nz(0.5), "A1": Param(2.0, lambda v, N: True, "real", (0.5, 4.0)), "A0": _real(0.5)},
        _scarf1,
        lambda p, N: _E(QES, NON, None) if p["A2"] != 0 else _E(EX, NORM, True),
        lambda p, N, n, s: (2 * p["A1"] * N + p["a"] * N**2 + p["A1"] ** 2 / p["a"]
                            + 2 * p["A2"] * (p["A0"] + p["A2"]) / p["a"] + 2 * p["A2"] * s),
        _with(_scarf1, A2=EPS * 1j),
    ),
]

PRESETS: dict[str, Preset] = {p.id: p for p in _PRESETS}


def list_presets() -> list[Preset]:
    return list(_PRESETS)


def get_preset(preset_id: str) -> Preset:
    try:
        return PRESETS[preset_id]
    except KeyError:
        raise PresetError(f"unknown preset {preset_id!r}; known: {', '.join(PRESETS)}") from None


def instantiate(preset_id: str, params: dict | None = None, N: int = 0) -> ModelSpec:
    return get_preset(preset_id).instantiate(params, N)
