"""Independent numerical checks of computed levels.

* grid residual of (-d^2/dx^2 + V - E) phi with the 3-point stencil and its
  convergence order under h -> h/2,
* a finite-difference eigenvalue oracle for real, normalizable spectra,
* parity equivalence of the mirrored Morse QES model with the exact Morse
  QNM ladder,
* the two root-sum identities used in that equivalence.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .bethe import RootSet, bae_residuals, lambda_from_roots, residual_scale
from .coordinates import CanonicalCoordinate, canonicalize
from .model import ModelSpec, PolyP, PolyQ, complex_to_json
from .prepotential import Normalizability
from .spectrum import SpectralLevel, assemble_potential, spectral_levels

ORDER_BAND = (1.7, 2.3)


def default_window(form: CanonicalCoordinate) -> tuple[float, float]:
    """A comfortable interior sampling window (not a truncation rule)."""
    L = form.length
    fam = form.family
    if fam in ("scarf2", "morse"):
        return (-6 * L, 6 * L)
    if fam == "gen-poschl-teller":
        return (0.05 * L, 6 * L)
    if fam == "scarf1":
        h = form.domain[1]
        return (-0.95 * h, 0.95 * h)
    if fam == "shifted-osc":
        return (-3.0 / form.gamma**0.25, 3.0 / form.gamma**0.25)
    return (0.1, 4.0)


@dataclass(frozen=True)
class Grid:
    x_lo: float
    x_hi: float
    M: int

    def __post_init__(self):
        if self.M < 64:
            raise ValueError("grids need at least 64 points")
        if not self.x_hi > self.x_lo:
            raise ValueError("empty grid interval")

    @property
    def h(self) -> float:
        return (self.x_hi - self.x_lo) / (self.M - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.M)

    def refined(self) -> "Grid":
        return Grid(self.x_lo, self.x_hi, 2 * self.M - 1)


def _reach(V, E: complex, start: float, stop: float, n: int = 4001) -> float:
    """First point from start toward stop where |V - E| >= 1e3 |E| + 1e3, else stop."""
    xs = np.linspace(start, stop, n)
    with np.errstate(over="ignore", invalid="ignore"):
        v = V(xs)
    big = ~np.isfinite(v) | (np.abs(v - E) >= 1e3 * abs(E) + 1e3)
    idx = np.nonzero(big)[0]
    return float(xs[idx[0]]) if idx.size else float(stop)


def truncation(spec: ModelSpec, energy: complex = 0j, cap: float = 12.0, standoff: float = 0.05) -> tuple[float, float]:
    """Window [x_lo, x_hi] where |V - E| stays below 1e3 |E| + 1e3, capped at cap/sqrt|alpha|.

    Finite ends of the domain are approached no closer than ``standoff`` in
    units of the coordinate length (the distance to pi/2 for Scarf I).
    """
    form, _ = canonicalize(spec)
    V = assemble_potential(spec).V
    L = form.length
    lo, hi = form.domain
    X = cap * L
    fam = form.family
    if fam == "scarf1":
        t = standoff * L
        return (_reach(V, energy, 0.0, lo + t), _reach(V, energy, 0.0, hi - t))
    if fam in ("gen-poschl-teller", "radial-osc"):
        x_hi = _reach(V, energy, L, X)
        t = standoff * (L if fam == "gen-poschl-teller" else min(L, x_hi))
        x_lo = _reach(V, energy, L, t) if L > t else t
        return (x_lo, x_hi)
    return (_reach(V, energy, 0.0, -X), _reach(V, energy, 0.0, X))


def default_grid(spec: ModelSpec, energy: complex = 0j, M: int = 2001) -> Grid:
    lo, hi = truncation(spec, energy)
    return Grid(lo, hi, M)


# -- residuals ---------------------------------------------------------------------------


@dataclass
class ResidualNorm:
    l2: float
    max: float
    M: int


def residual_profile(spec: ModelSpec, level: SpectralLevel, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Interior x and r(x) = -phi'' + (V - E) phi with phi scaled to max|phi| = 1."""
    V = assemble_potential(spec).V
    x = grid.x
    phi = level.phi.scaled(x)
    h = grid.h
    d2 = (phi[2:] - 2 * phi[1:-1] + phi[:-2]) / h**2
    xi = x[1:-1]
    r = -d2 + (V(xi) - level.energy) * phi[1:-1]
    return xi, r


def residual_norm(spec: ModelSpec, level: SpectralLevel, grid: Grid) -> ResidualNorm:
    """Relative residuals ||r||_2/||phi||_2 and max|r|/max|phi| over interior points."""
    xi, r = residual_profile(spec, level, grid)
    phi = level.phi.scaled(grid.x)[1:-1]
    return ResidualNorm(
        float(np.linalg.norm(r) / np.linalg.norm(phi)),
        float(np.max(np.abs(r)) / np.max(np.abs(phi))),
        grid.M,
    )


@dataclass
class ConvergenceEstimate:
    coarse: ResidualNorm
    fine: ResidualNorm
    order: float
    flags: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return ORDER_BAND[0] <= self.order <= ORDER_BAND[1]


def convergence_order(spec: ModelSpec, level: SpectralLevel, grid_pair: tuple[Grid, Grid]) -> ConvergenceEstimate:
    """log2 of the residual ratio between a grid and its h/2 refinement."""
    g1, g2 = grid_pair
    r1 = residual_norm(spec, level, g1)
    r2 = residual_norm(spec, level, g2)
    ratio_h = g1.h / g2.h
    flags = []
    if r2.l2 == 0 or r1.l2 == 0:
        return ConvergenceEstimate(r1, r2, float("nan"), ["zero-residual"])
    order = math.log(r1.l2 / r2.l2) / math.log(ratio_h)
    if r2.l2 >= r1.l2:
        flags.append("non-monotone")
    return ConvergenceEstimate(r1, r2, order, flags)


# -- finite-difference oracle --------------------------------------------------------------


@dataclass
class OracleResult:
    eigenvalues: np.ndarray
    widened: np.ndarray
    grid: Grid
    max_shift: float
    truncation_ok: bool


def _fd_eigs(Vfun, x: np.ndarray, k: int) -> np.ndarray:
    h = x[1] - x[0]
    xi = x[1:-1]
    d = 2.0 / h**2 + Vfun(xi)
    e = -np.ones(len(xi) - 1) / h**2
    return eigh_tridiagonal(d, e, select="i", select_range=(0, k - 1), eigvals_only=True)


def fd_oracle(spec: ModelSpec, grid: Grid, k: int, targets=None, shift_tol: float = 1e-6) -> OracleResult:
    """k lowest eigenvalues of the 3-point discretization with Dirichlet ends.

    Finite ends of the domain carry the Dirichlet wall at the endpoint itself
    (V is only sampled at interior points); infinite ends are truncated at the
    grid limits.  For the radial coordinate with a regular origin (no x^-2
    term) the problem is posed on the symmetric line with V(|x|).  The
    truncation check widens every infinite end by 25% at fixed spacing and
    reports the largest relative shift of the eigenvalues nearest ``targets``
    (of all k eigenvalues if no targets are given).
    """
    form, _ = canonicalize(spec)
    asm = assemble_potential(spec)
    symmetric = form.family == "radial-osc" and asm.terms.get("x^-2", 0) == 0
    dom_lo, dom_hi = form.domain
    if symmetric:
        V = lambda x: asm.V(np.abs(x)).real
        dom_lo, lo, hi = -math.inf, -grid.x_hi, grid.x_hi
    else:
        V = lambda x: asm.V(x).real
        lo = grid.x_lo if math.isinf(dom_lo) else dom_lo
        hi = grid.x_hi if math.isinf(dom_hi) else dom_hi
    h = (hi - lo) / (grid.M - 1)
    with np.errstate(divide="ignore", over="ignore"):
        ev = _fd_eigs(V, np.linspace(lo, hi, grid.M), k)
        lo2 = lo - 0.25 * abs(lo) if math.isinf(dom_lo) else lo
        hi2 = hi + 0.25 * abs(hi) if math.isinf(dom_hi) else hi
        M2 = int(round((hi2 - lo2) / h)) + 1
        ev2 = _fd_eigs(V, np.linspace(lo2, hi2, M2), k)
    idx = np.arange(k) if targets is None else np.array([np.argmin(np.abs(ev - complex(t).real)) for t in targets])
    shift = float(np.max(np.abs(ev2[idx] - ev[idx]) / np.maximum(1.0, np.abs(ev[idx]))))
    return OracleResult(ev, ev2, Grid(lo, hi, grid.M), shift, shift <= shift_tol)


def widen(spec: ModelSpec, grid: Grid, factor: float = 2.0, energy: complex = 0j) -> Grid:
    """Scale the infinite-end limits by ``factor`` at fixed spacing.

    Ends where |V - E| already exceeds the truncation threshold are left alone.
    """
    form, _ = canonicalize(spec)
    V = assemble_potential(spec).V
    lo, hi = form.domain
    E = complex(energy)

    def open_end(x):
        with np.errstate(over="ignore", invalid="ignore"):
            v = V(np.array([x]))[0]
        return bool(np.isfinite(v) and abs(v - E) < 1e3 * abs(E) + 1e3)

    x_lo = grid.x_lo * factor if math.isinf(lo) and open_end(grid.x_lo) else grid.x_lo
    x_hi = grid.x_hi * factor if math.isinf(hi) and open_end(grid.x_hi) else grid.x_hi
    return Grid(x_lo, x_hi, int(round((x_hi - x_lo) / grid.h)) + 1)


def oracle_applicable(spec: ModelSpec, grid: Grid, energies) -> tuple[bool, str]:
    """Dirichlet truncation only represents states that are classically forbidden at the cut.

    Requires V above every target energy at each truncated (infinite) end;
    fails for potentials unbounded from below there.
    """
    form, _ = canonicalize(spec)
    V = assemble_potential(spec).V
    top = max(complex(e).real for e in energies)
    lo, hi = form.domain
    for end, x in (("lower", grid.x_lo), ("upper", grid.x_hi)):
        if math.isinf(lo if end == "lower" else hi):
            v = float(V(np.array([x]))[0].real)
            if not v > top:
                return False, f"V({x:.4g}) = {v:.4g} lies below the target energies at the {end} cut"
    return True, ""


def match_energies(energies, oracle: np.ndarray, rel_tol: float = 1e-3) -> list[dict]:
    """Nearest oracle eigenvalue for each energy; relative error against max(1, |E|)."""
    out = []
    for E in energies:
        E = complex(E)
        j = int(np.argmin(np.abs(oracle - E.real)))
        err = abs(oracle[j] - E) / max(1.0, abs(E))
        out.append({"E": complex_to_json(E), "oracle": float(oracle[j]), "index": j, "rel_error": float(err),
                    "passed": bool(err <= rel_tol)})
    return out


# -- Morse parity equivalence ----------------------------------------------------------------


def is_morse_mirror(spec: ModelSpec, tol: float = 1e-12) -> bool:
    form, c = canonicalize(spec)
    if form.family != "morse" or c.A2 == 0 or c.A0 != 0:
        return False
    t = c.A1 / form.alpha - (c.N + 0.5)
    return abs(c.A2.real) <= tol * abs(c.A2) and abs(t.real) <= tol * (1 + abs(t))


def mirror_partner(spec: ModelSpec) -> tuple[ModelSpec, float, float]:
    """Exact Morse QNM model (A2 = 0, A0 = i c, A1 = -alpha (1 + i d)/2) mapped by parity.

    Returns the partner spec and (c, d) read off A2 = -i c and
    A1/alpha = i d/2 + N + 1/2.
    """
    form, m = canonicalize(spec)
    a = form.alpha
    c = float((1j * m.A2).real)
    d = float((2 * (m.A1 / a - m.N - 0.5) / 1j).real)
    p = PolyP(0j, -a * (1 + 1j * d) / 2, 1j * c)
    return ModelSpec(p, PolyQ(a, 0, 0), m.N, "morse"), c, d


@dataclass
class ParityReport:
    c: float
    d: float
    N: int
    energy_deviation: float
    bae_residual: float
    ratio_deviation: float
    pairs: list[dict] = field(default_factory=list)
    energy_tol: float = 1e-10
    bae_tol: float = 1e-9
    ratio_tol: float = 1e-8

    @property
    def energies_agree(self) -> bool:
        return self.energy_deviation <= self.energy_tol

    @property
    def bae_ok(self) -> bool:
        return self.bae_residual <= self.bae_tol

    @property
    def ratio_ok(self) -> bool:
        return self.ratio_deviation <= self.ratio_tol

    @property
    def passed(self) -> bool:
        return self.energies_agree and self.bae_ok and self.ratio_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(energies_agree=self.energies_agree, bae_ok=self.bae_ok, ratio_ok=self.ratio_ok, passed=self.passed)
        return d


def parity_equivalence(spec: ModelSpec, n_points: int = 201) -> ParityReport:
    """Check the mirrored Morse QES model against its exact QNM partner under x -> -x.

    Mirror level with j zero roots pairs with partner level n = N - j; the
    partner roots w map to 1/w.  Energies, the mirror Bethe equations at the
    mapped roots, and the ratio phi_mirror(x)/phi_partner(-x) are compared.
    """
    if not is_morse_mirror(spec):
        raise ValueError("not a mirrored Morse QES model")
    form, m = canonicalize(spec)
    partner, c, d = mirror_partner(spec)
    N = m.N
    mirror_levels = spectral_levels(m)
    partner_levels = {lv.n: lv for lv in spectral_levels(partner)}
    L = form.length
    xs = np.linspace(-3 * L, 3 * L, n_points)
    e_dev = bae_dev = r_dev = 0.0
    pairs = []
    for ml in mirror_levels:
        zr = np.asarray(ml.level.roots)
        j = int(np.sum(np.abs(zr) <= 1e-12 * (1 + np.max(np.abs(zr), initial=0.0))))
        pl = partner_levels[N - j]
        de = abs(ml.energy - pl.energy)
        w = np.asarray(pl.level.roots)
        mapped = np.concatenate([np.zeros(j, complex), 1.0 / w])
        flags: list[str] = []
        res = bae_residuals(m, mapped, flags)
        bres = float(np.max(np.abs(res)) / residual_scale(m, mapped)) if len(mapped) else 0.0
        lg = ml.phi.log(xs) - pl.phi.log(-xs)
        ratio = np.exp(lg - lg[n_points // 2])
        rd = float(np.max(np.abs(ratio - 1.0)))
        e_dev, bae_dev, r_dev = max(e_dev, de), max(bae_dev, bres), max(r_dev, rd)
        pairs.append({"mirror_zero_roots": j, "partner_n": N - j, "E_mirror": complex_to_json(ml.energy),
                      "E_partner": complex_to_json(pl.energy), "energy_deviation": de,
                      "bae_residual": bres, "ratio_deviation": rd})
    return ParityReport(c, d, N, e_dev, bae_dev, r_dev, pairs)


# -- root-sum identities ----------------------------------------------------------------------


@dataclass
class IdentityReport:
    per_root_deviation: float  # sum_{l!=k} z_l/(z_l-z_k) - (N-1 - sum_{l!=k} z_k/(z_k-z_l))
    double_sum_deviation: float  # sum_k sum_{l!=k} z_k/(z_k-z_l) - N(N-1)/2
    warnings: list[str] = field(default_factory=list)

    def passed(self, tol: float = 1e-10) -> bool:
        return self.per_root_deviation <= tol and self.double_sum_deviation <= tol


def summation_identities(roots) -> IdentityReport:
    z = np.asarray(roots.roots if isinstance(roots, RootSet) else roots, dtype=complex)
    n = len(z)
    if n < 2:
        return IdentityReport(0.0, 0.0)
    diff = z[:, None] - z[None, :]
    off = ~np.eye(n, dtype=bool)
    warnings = []
    scale = 1 + np.max(np.abs(z))
    if np.min(np.abs(diff[off])) <= 1e-10 * scale:
        warnings.append("clustered-roots")
        return IdentityReport(float("nan"), float("nan"), warnings)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(off, z[None, :] / (-diff), 0)  # z_l/(z_l - z_k), row k
        b = np.where(off, z[:, None] / diff, 0)  # z_k/(z_k - z_l), row k
    dev1 = float(np.max(np.abs(a.sum(axis=1) - (n - 1 - b.sum(axis=1)))))
    dev2 = float(abs(b.sum() - n * (n - 1) / 2))
    return IdentityReport(dev1, dev2, warnings)


# -- full report ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    magnitude: float
    detail: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    spec: dict
    grid: dict
    checks: list[CheckResult] = field(default_factory=list)
    levels: list[dict] = field(default_factory=list)
    oracle: list[dict] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, magnitude: float, **detail) -> None:
        self.checks.append(CheckResult(name, bool(passed), float(magnitude), detail))

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "spec": self.spec,
            "grid": self.grid,
            "checks": [asdict(c) for c in self.checks],
            "levels": self.levels,
            "oracle": self.oracle,
            "flags": self.flags,
        }


@dataclass(frozen=True)
class VerifyConfig:
    grid_points: int = 2001
    x_lo: float | None = None
    x_hi: float | None = None
    bae_tol: float = 1e-9
    identity_tol: float = 1e-10
    oracle_points: int = 4001
    oracle_rel_tol: float = 1e-3


def verify_model(spec: ModelSpec, config: VerifyConfig = VerifyConfig()) -> VerificationReport:
    """Run every applicable check on all levels of ``spec``."""
    form, cspec = canonicalize(spec)
    levels = spectral_levels(spec)
    report = VerificationReport(spec.to_dict(), {})
    for lv in levels:
        lo, hi = truncation(spec, lv.energy)
        if config.x_lo is not None:
            lo = max(lo, config.x_lo) if form.domain[0] > -math.inf else config.x_lo
        if config.x_hi is not None:
            hi = config.x_hi
        g1 = Grid(lo, hi, config.grid_points)
        conv = convergence_order(spec, lv, (g1, g1.refined()))
        scale = residual_scale(cspec, lv.level.roots)
        bae = lv.level.residual_max / scale
        lam_dev = abs(lambda_from_roots(spec, lv.level) - lv.level.lam) / max(1.0, abs(lv.level.lam))
        ids = summation_identities(lv.level)
        tag = f"level {lv.n}"
        report.add(f"{tag}: convergence order", conv.passed, conv.order, l2_coarse=conv.coarse.l2,
                   l2_fine=conv.fine.l2, max_coarse=conv.coarse.max, max_fine=conv.fine.max, flags=conv.flags)
        ok_bae = bae <= config.bae_tol or "clustered-roots" in lv.level.flags
        report.add(f"{tag}: BAE residual", ok_bae, bae)
        report.add(f"{tag}: Lambda vs root sum", lam_dev <= 1e-9, lam_dev)
        if not ids.warnings:
            report.add(f"{tag}: summation identities", ids.passed(config.identity_tol),
                       max(ids.per_root_deviation, ids.double_sum_deviation))
        report.levels.append({**lv.to_dict(), "grid": [lo, hi, config.grid_points]})
        report.flags.extend(f"{tag}: {f}" for f in lv.level.flags)

    real_v = not assemble_potential(spec).diagnostics
    real_E = all(abs(lv.energy.imag) <= 1e-9 * (1 + abs(lv.energy.real)) for lv in levels)
    normalizable = all(lv.endpoints.verdict is Normalizability.NORMALIZABLE for lv in levels)
    if real_v and real_E and normalizable and levels:
        Emax = max(abs(lv.energy) for lv in levels)
        lo, hi = truncation(spec, Emax)
        grid = Grid(lo, hi, config.oracle_points)
        energies = [lv.energy for lv in levels]
        ok, why = oracle_applicable(spec, grid, energies)
        if ok:
            k = 2 * len(levels) + 4
            res = fd_oracle(spec, grid, k, targets=energies)
            for _ in range(3):  # weakly bound levels need a longer window
                if res.truncation_ok:
                    break
                grid = widen(spec, grid, energy=Emax)
                res = fd_oracle(spec, grid, k, targets=energies)
            rows = match_energies(energies, res.eigenvalues, config.oracle_rel_tol)
            report.oracle = rows
            worst = max(r["rel_error"] for r in rows)
            report.add("fd oracle", all(r["passed"] for r in rows) and res.truncation_ok, worst,
                       truncation_shift=res.max_shift, window=[grid.x_lo, grid.x_hi], points=grid.M)
        else:
            report.flags.append(f"fd oracle skipped: {why}")
    if is_morse_mirror(spec):
        par = parity_equivalence(spec)
        report.add("parity equivalence", par.passed,
                   max(par.energy_deviation, par.bae_residual, par.ratio_deviation), parity=par.to_dict())
    report.grid = {"points": config.grid_points, "refined_points": 2 * config.grid_points - 1}
    return report
