"""Bethe-ansatz levels of type-1 QES (and exactly solvable) models.

The gauged operator  -Q d^2/dz^2 + (2P - Q'/2) d/dz - 2 A2 N z  preserves the
polynomials of degree <= N.  Its matrix on the monomials 1, z, ..., z^N has
eigenvalues Lambda = 2 A1 N - alpha N^2 + 2 A2 sum(z_k); the eigenvectors are
the coefficient vectors of p_N(z) = prod(z - z_k).  The Bethe equations are
kept as an independent residual check on the roots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coordinates import canonicalize
from .model import ModelSpec, PolyP, PolyQ, complex_to_json, require_generated

CLUSTER_TOL = 1e-10


@dataclass(frozen=True)
class GaugedMatrix:
    matrix: np.ndarray  # (N+1) x (N+1); row i = coefficient of z^i, column j = action on z^j

    @property
    def N(self) -> int:
        return self.matrix.shape[0] - 1


def algebraize(spec: ModelSpec) -> GaugedMatrix:
    require_generated(spec)
    N = spec.N
    A2, A1, A0 = spec.A2, spec.A1, spec.A0
    a, b, g = spec.alpha, spec.beta, spec.gamma
    M = np.zeros((N + 1, N + 1), dtype=complex)
    for j in range(N + 1):
        if j + 1 <= N:
            M[j + 1, j] = 2 * A2 * (j - N)
        M[j, j] = j * (2 * A1 - a * j)
        if j >= 1:
            M[j - 1, j] = j * (2 * A0 - b * (j - 0.5))
        if j >= 2:
            M[j - 2, j] = -g * j * (j - 1)
    return GaugedMatrix(M)


@dataclass
class RootSet:
    lam: complex
    roots: np.ndarray
    coefficients: np.ndarray  # ascending, monic in the top nonzero coefficient
    residuals: np.ndarray
    flags: list[str] = field(default_factory=list)
    N: int = 0
    # diagonal position for triangular matrices (the ladder index when A2 = 0)
    column: int | None = None

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def ladder_index(self) -> int:
        return self.column if self.column is not None else self.degree

    @property
    def residual_max(self) -> float:
        return float(np.max(np.abs(self.residuals))) if len(self.residuals) else 0.0

    @property
    def root_sum(self) -> complex:
        return complex(np.sum(self.roots)) if len(self.roots) else 0j

    def to_dict(self) -> dict:
        return {
            "lambda": complex_to_json(self.lam),
            "roots": [complex_to_json(r) for r in self.roots],
            "residual_max": self.residual_max,
            "flags": list(self.flags),
        }


# -- polynomial roots --------------------------------------------------------------------


def _horner(c: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """p(z) and p'(z) for descending coefficients c."""
    p = np.zeros_like(z)
    d = np.zeros_like(z)
    for ck in c:
        d = d * z + p
        p = p * z + ck
    return p, d


def aberth_polish(coeffs: np.ndarray, roots: np.ndarray, tol: float = 1e-15, max_iter: int = 80) -> np.ndarray:
    """Simultaneous Newton (Aberth-Ehrlich) refinement of all zeros of a polynomial.

    ``coeffs`` ascending.  Evaluation runs in extended precision so that
    clustered zeros converge to the zeros of the given double coefficients.
    Stops when every correction is below tol*(1+|z|).
    """
    z = np.array(roots, dtype=np.clongdouble)
    n = len(z)
    if n == 0:
        return np.asarray(z, dtype=complex)
    c = np.asarray(coeffs, dtype=complex)[::-1].astype(np.clongdouble)
    off = ~np.eye(n, dtype=bool)
    for _ in range(max_iter):
        pv, dv = _horner(c, z)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratio = pv / dv
            diff = z[:, None] - z[None, :]
            inv = np.where(off, 1.0 / np.where(off, diff, 1.0), 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        z = z - w
        if np.all(np.abs(w) <= tol * (1 + np.abs(z))):
            break
    return np.asarray(z, dtype=complex)


def polynomial_roots(coeffs: np.ndarray) -> np.ndarray:
    """Zeros of an ascending coefficient vector: companion matrix, then Aberth polish."""
    c = np.asarray(coeffs, dtype=complex)
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        raise ValueError("zero polynomial")
    c = c[: nz[-1] + 1]
    k0 = nz[0]  # exact zero roots
    tail = c[k0:]
    if len(tail) <= 1:
        return np.zeros(k0, dtype=complex)
    r = np.roots(tail[::-1])
    r = aberth_polish(tail, r)
    return np.concatenate([np.zeros(k0, dtype=complex), r])


def sort_roots(roots: np.ndarray) -> np.ndarray:
    r = np.asarray(roots, dtype=complex)
    if r.size == 0:
        return r
    idx = np.lexsort((np.round(r.imag, 12), np.round(r.real, 12)))
    return r[idx]


# -- Bethe equations ----------------------------------------------------------------------


def bae_residuals(spec: ModelSpec, roots, flags: list[str] | None = None) -> np.ndarray:
    """Residuals A2 z_k^2 + (A1 - alpha/2) z_k + A0 - beta/4 - sum_{l!=k} Q(z_k)/(z_k - z_l).

    Pairs of coincident roots at a zero of Q contribute their vanishing limit;
    other clustered pairs are flagged as unreliable.
    """
    z = np.asarray(roots, dtype=complex)
    n = len(z)
    out = np.zeros(n, dtype=complex)
    if n == 0:
        return out
    A2, A1, A0 = spec.A2, spec.A1, spec.A0
    a, b, g = spec.alpha, spec.beta, spec.gamma
    Q = a * z * z + b * z + g
    scale = residual_scale(spec, z)
    clustered = False
    for k in range(n):
        acc = A2 * z[k] ** 2 + (A1 - a / 2) * z[k] + A0 - b / 4
        for l in range(n):
            if l == k:
                continue
            d = z[k] - z[l]
            if abs(d) <= CLUSTER_TOL * scale:
                if abs(Q[k]) <= CLUSTER_TOL * scale:
                    continue
                clustered = True
                acc = complex(np.nan, np.nan)
                break
            acc -= Q[k] / d
        out[k] = acc
    if clustered and flags is not None and "clustered-roots" not in flags:
        flags.append("clustered-roots")
    return out


def bae_newton(spec: ModelSpec, roots, max_iter: int = 30) -> np.ndarray:
    """Newton iteration on the Bethe equations themselves, starting from ``roots``.

    Clustered roots are badly conditioned in the monomial coefficients of the
    eigenvector but not in the Bethe equations, so this repairs them.  Steps
    are halved until the residual norm decreases; sets with coincident roots
    are returned unchanged.
    """
    z = np.asarray(roots, dtype=complex).copy()
    n = len(z)
    if n == 0:
        return z
    scale = residual_scale(spec, z)
    diff = z[:, None] - z[None, :]
    off = ~np.eye(n, dtype=bool)
    if n > 1 and np.min(np.abs(diff[off])) <= CLUSTER_TOL * scale:
        return z
    A2, A1, a, b, g = spec.A2, spec.A1, spec.alpha, spec.beta, spec.gamma

    def F(z):
        d = z[:, None] - z[None, :]
        inv = np.where(off, 1.0 / np.where(off, d, 1.0), 0.0)
        Q = a * z * z + b * z + g
        return A2 * z * z + (A1 - a / 2) * z + spec.A0 - b / 4 - Q * inv.sum(axis=1), inv, Q

    r, inv, Q = F(z)
    norm = np.linalg.norm(r)
    for _ in range(max_iter):
        if norm <= 1e-15 * scale * n:
            break
        dQ = 2 * a * z + b
        J = Q[:, None] * inv**2  # d F_k / d z_l for l != k
        np.fill_diagonal(J, 2 * A2 * z + (A1 - a / 2) - dQ * inv.sum(axis=1) + Q * (inv**2).sum(axis=1))
        try:
            step = np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            break
        t = 1.0
        while t > 1e-3:
            z_new = z - t * step
            r_new, inv_new, Q_new = F(z_new)
            n_new = np.linalg.norm(r_new)
            if np.isfinite(n_new) and n_new < norm:
                break
            t /= 2
        else:
            break
        z, r, inv, Q, norm = z_new, r_new, inv_new, Q_new, n_new
    return z


def residual_scale(spec: ModelSpec, roots) -> float:
    z = np.asarray(roots, dtype=complex)
    zmax = float(np.max(np.abs(z))) if z.size else 0.0
    return max(1.0, zmax**2 * spec.coefficient_scale())


# -- eigenpairs ---------------------------------------------------------------------------


def _triangular_kind(M: np.ndarray) -> str | None:
    if not np.any(np.triu(M, 1)):
        return "lower"
    if not np.any(np.tril(M, -1)):
        return "upper"
    return None


def _substitute(M: np.ndarray, j: int, kind: str, scale: float) -> tuple[np.ndarray | None, bool]:
    """Eigenvector for the diagonal eigenvalue M[j, j] of a triangular matrix, v[j] = 1."""
    n = M.shape[0]
    lam = M[j, j]
    v = np.zeros(n, dtype=complex)
    v[j] = 1.0
    defective = False
    if kind == "upper":
        for i in range(j - 1, -1, -1):
            rhs = -(M[i, i + 1 : j + 1] @ v[i + 1 : j + 1])
            piv = M[i, i] - lam
            if abs(piv) <= 1e-13 * scale:
                if abs(rhs) > 1e-9 * scale:
                    defective = True
                v[i] = 0.0
            else:
                v[i] = rhs / piv
    else:
        for i in range(j + 1, n):
            rhs = -(M[i, j:i] @ v[j:i])
            piv = M[i, i] - lam
            if abs(piv) <= 1e-13 * scale:
                if abs(rhs) > 1e-9 * scale:
                    defective = True
                v[i] = 0.0
            else:
                v[i] = rhs / piv
    return v, defective


def _refine(M: np.ndarray, lam: complex, v: np.ndarray, iters: int = 3) -> tuple[complex, np.ndarray]:
    """Newton refinement of an eigenpair with the normalization v[-1] = 1."""
    n = M.shape[0]
    v = v / v[-1]
    e = np.zeros(n, dtype=complex)
    e[-1] = 1.0
    for _ in range(iters):
        r = M @ v - lam * v
        J = np.zeros((n + 1, n + 1), dtype=complex)
        J[:n, :n] = M - lam * np.eye(n)
        J[:n, n] = -v
        J[n, :n] = e
        rhs = np.concatenate([-r, [0.0]])
        try:
            d = np.linalg.solve(J, rhs)
        except np.linalg.LinAlgError:
            break
        v = v + d[:n]
        lam = lam + d[n]
        if np.max(np.abs(d)) <= 1e-15 * (1 + np.max(np.abs(v))):
            break
    return complex(lam), v


def eigenpairs(G: GaugedMatrix) -> list[tuple[complex, np.ndarray, list[str], int | None]]:
    M = G.matrix
    n = M.shape[0]
    scale = max(1.0, float(np.max(np.abs(M))))
    kind = _triangular_kind(M)
    out = []
    if kind is not None:
        diag = np.diag(M)
        for j in range(n):
            flags = []
            if np.sum(np.abs(diag - diag[j]) <= 1e-9 * scale) > 1:
                flags.append("degenerate")
            v, defective = _substitute(M, j, kind, scale)
            if defective:
                flags.append("defective")
            out.append((complex(diag[j]), v, flags, j))
        return out
    w, V = np.linalg.eig(M)
    for i in range(n):
        flags = []
        if np.sum(np.abs(w - w[i]) <= 1e-9 * scale) > 1:
            flags.append("degenerate")
        lam, v = w[i], V[:, i]
        if abs(v[-1]) > 1e-12 * np.max(np.abs(v)):
            lam, v = _refine(M, lam, v)
        else:
            flags.append("degree-deficient")
        out.append((complex(lam), v, flags, None))
    return out


def _shifted(spec: ModelSpec, t: complex) -> ModelSpec:
    """The same model in w = z - t: P(w + t), Q(w + t)."""
    A2, A1, A0 = spec.A2, spec.A1, spec.A0
    a, b, g = spec.alpha, spec.beta, spec.gamma
    p = PolyP(A2, 2 * A2 * t + A1, A2 * t * t + A1 * t + A0)
    q = PolyQ(a, 2 * a * t + b, a * t * t + b * t + g)
    return ModelSpec(p, q, spec.N, spec.family)


def _q_zeros(spec: ModelSpec) -> np.ndarray:
    c = np.array([spec.alpha, spec.beta, spec.gamma], dtype=complex)
    nz = np.nonzero(c)[0]
    return np.roots(c[nz[0]:]) if nz.size and nz[0] < 2 else np.zeros(0, complex)


def _recentered_roots(spec: ModelSpec, lam: complex, roots: np.ndarray, worst: float) -> np.ndarray:
    """Roots of the level nearest ``lam`` re-solved in bases centred at the zeros of Q.

    Roots that crowd a zero of Q are ill-conditioned in monomial coefficients
    about the origin but not about that zero.
    """
    best, best_res = roots, worst
    for t in _q_zeros(spec):
        if t == 0:
            continue
        pairs = eigenpairs(algebraize(_shifted(spec, complex(t))))
        _, v, flags, _ = min(pairs, key=lambda e: abs(e[0] - lam))
        if abs(v[-1]) <= 1e-12 * np.max(np.abs(v)):
            continue
        cand = bae_newton(spec, polynomial_roots(v / v[-1]) + t)
        res = float(np.max(np.abs(bae_residuals(spec, cand))))
        if np.isfinite(res) and res < best_res:
            best, best_res = cand, res
    return best


def qes_levels(spec: ModelSpec) -> list[RootSet]:
    """All N+1 levels: eigenvalue Lambda, Bethe roots, residuals, flags.

    Works in the canonical coordinate of ``spec``.  Levels are ordered by
    (Re Lambda, Im Lambda); roots within a level by (Re z, Im z).
    """
    _, cspec = canonicalize(spec)
    G = algebraize(cspec)
    levels = []
    for lam, v, flags, col in eigenpairs(G):
        flags = list(flags)
        if "defective" in flags:
            empty = np.zeros(0, complex)
            levels.append(RootSet(lam, empty, empty, empty, flags, cspec.N, col))
            continue
        nz = np.nonzero(np.abs(v) > 0)[0]
        top = nz[-1]
        coeffs = v[: top + 1] / v[top]
        if top < cspec.N and "degree-deficient" not in flags:
            flags.append("degree-deficient")
        roots = polynomial_roots(coeffs)
        if "degree-deficient" not in flags:
            polished = bae_newton(cspec, roots)
            worst = float(np.max(np.abs(bae_residuals(cspec, polished)))) if len(polished) else 0.0
            if not worst <= 1e-12 * residual_scale(cspec, polished):
                polished = _recentered_roots(cspec, lam, polished, worst if np.isfinite(worst) else np.inf)
            if not np.array_equal(polished, roots):
                roots = polished
                coeffs = np.poly(roots)[::-1].astype(complex)
        roots = sort_roots(roots)
        res = bae_residuals(cspec, roots, flags)
        levels.append(RootSet(lam, roots, coeffs, res, flags, cspec.N, col))
    levels.sort(key=lambda L: (round(L.lam.real, 9), round(L.lam.imag, 9)))
    return levels


def lambda_from_roots(spec: ModelSpec, level: RootSet) -> complex:
    """2 A1 n - alpha n^2 + 2 A2 sum(z_k) for a level of degree n."""
    _, c = canonicalize(spec)
    n = level.degree
    return 2 * c.A1 * n - c.alpha * n * n + 2 * c.A2 * level.root_sum


# -- root-set symmetries ----------------------------------------------------------------


@dataclass
class ClosureResult:
    closed: bool
    pairing: list[tuple[int, int]]
    max_mismatch: float


def conjugation_closure(roots, tol: float = 1e-9) -> ClosureResult:
    """Is the multiset invariant under z -> -conj(z)?  Returns a perfect pairing if so."""
    from scipy.optimize import linear_sum_assignment

    z = np.asarray(roots, dtype=complex)
    if z.size == 0:
        return ClosureResult(True, [], 0.0)
    img = -np.conj(z)
    cost = np.abs(z[:, None] - img[None, :])
    rows, cols = linear_sum_assignment(cost)
    mism = cost[rows, cols]
    worst = float(np.max(mism))
    scale = 1 + float(np.max(np.abs(z)))
    return ClosureResult(worst <= tol * scale, [(int(r), int(c)) for r, c in zip(rows, cols)], worst)
