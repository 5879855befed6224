"""Orthogonality relations on R^d and numerical checks of the axioms O1-O4.

Four relations are supported: the trivial one (nonzero vectors are
orthogonal iff linearly independent), the Euclidean inner-product one,
Birkhoff-James orthogonality for an arbitrary :class:`NormSpec`, and
A-orthogonality ``<Ax, y> = 0`` for a symmetric matrix ``A``.

Verdicts are decided against a *defect*: a nonnegative, scale-free number
that is zero for exactly orthogonal pairs. ``x`` and ``y`` are declared
orthogonal when the defect is at most ``relation.tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_matrix, as_points, as_vector
from .linalg import NormSpec, golden_section_batch, norm_eval, plane_basis

KINDS = ("trivial", "inner_product", "birkhoff_james", "a_orthogonality")

THALES_TOL = 1e-8
_T_SCAN = 128
_THETA_GRID = 64


class SearchFailed(RuntimeError):
    """A numerical search ran out of budget. Never a disproof of an axiom."""

    code = "SEARCH_FAILED"


@dataclass(frozen=True, eq=False)
class OrthoRelation:
    kind: str
    norm: NormSpec | None = None
    matrix: np.ndarray | None = field(default=None, repr=False)
    tolerance: float = 1e-8
    rank_tol: float = 1e-10

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown relation kind {self.kind!r}")
        if self.kind == "birkhoff_james" and self.norm is None:
            raise ValueError("Birkhoff-James orthogonality needs a norm")
        if self.kind == "a_orthogonality":
            if self.matrix is None:
                raise ValueError("A-orthogonality needs a matrix")
            a = as_matrix(self.matrix, "A", symmetric_tol=1e-12)
            a.setflags(write=False)
            object.__setattr__(self, "matrix", a)
        if not self.tolerance >= 0:
            raise ValueError("tolerance must be nonnegative")

    @classmethod
    def trivial(cls, **kw):
        return cls("trivial", **kw)

    @classmethod
    def inner_product(cls, **kw):
        return cls("inner_product", **kw)

    @classmethod
    def birkhoff_james(cls, norm="L2", **kw):
        if isinstance(norm, str):
            norm = NormSpec(norm)
        return cls("birkhoff_james", norm=norm, **kw)

    @classmethod
    def a_orthogonality(cls, matrix, **kw):
        return cls("a_orthogonality", matrix=np.array(matrix, dtype=np.float64), **kw)

    @property
    def dim(self):
        if self.kind == "a_orthogonality":
            return self.matrix.shape[0]
        if self.norm is not None and self.norm.kind == "Weighted":
            return len(self.norm.weights)
        return None

    @property
    def is_bilinear(self):
        return self.kind in ("inner_product", "a_orthogonality")

    @property
    def output_norm(self):
        """Norm used for magnitudes in this space (Euclidean unless BJ)."""
        return self.norm if self.kind == "birkhoff_james" else NormSpec("L2")

    def to_dict(self):
        d = {"kind": self.kind, "tolerance": self.tolerance}
        if self.norm is not None:
            d["norm"] = self.norm.to_dict()
        if self.matrix is not None:
            d["matrix"] = self.matrix.tolist()
        return d

    @classmethod
    def from_dict(cls, d):
        norm = NormSpec.from_dict(d["norm"]) if d.get("norm") else None
        matrix = np.array(d["matrix"], dtype=np.float64) if d.get("matrix") is not None else None
        return cls(d["kind"], norm=norm, matrix=matrix, tolerance=d.get("tolerance", 1e-8))


# -- Birkhoff-James minimisation ---------------------------------------------


def bj_minimize_batch(norm, X, Y):
    """Row-wise ``min over lam of ||x + lam*y||`` for stacked ``X`` and ``Y``.

    The search bracket is ``|lam| <= 2||x||/||y||``; outside it the norm
    already exceeds ``||x||``. Rows with ``y = 0`` return ``(0, ||x||)``.
    ``lam = 0`` is always a candidate, so the minimum never exceeds ``||x||``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    if X.shape != Y.shape:
        raise ValueError(f"dimension mismatch: {X.shape} vs {Y.shape}")
    nx = norm_eval(norm, X)
    ny = norm_eval(norm, Y)
    live = ny > 0
    bracket = np.where(live, 2.0 * nx / np.where(live, ny, 1.0), 0.0)
    lam = np.zeros(len(X))
    val = np.asarray(nx, dtype=np.float64).copy()
    if np.any(live):
        Xl, Yl, bl = X[live], Y[live], bracket[live]

        def f(t):
            return norm_eval(norm, Xl + t[:, None] * Yl)

        t, v = golden_section_batch(f, -bl, bl, 1e-12 * (1.0 + 2.0 * bl))
        better = v < val[live]
        lam[live] = np.where(better, t, 0.0)
        val[live] = np.where(better, v, val[live])
    return lam, val


def bj_minimize(norm, x, y):
    """Minimise the convex map ``lam -> ||x + lam*y||``; returns ``(lam*, min)``."""
    x = as_vector(x)
    y = as_vector(y, "y", x.shape[0])
    if not np.any(y):
        raise ValueError("y must be nonzero")
    lam, val = bj_minimize_batch(norm, x[None], y[None])
    return float(lam[0]), float(val[0])


def _bj_defect(norm, X, Y):
    nx = norm_eval(norm, X)
    _, m = bj_minimize_batch(norm, X, Y)
    safe = np.where(nx > 0, nx, 1.0)
    return np.where(nx > 0, (nx - m) / safe, 0.0)


# -- verdicts ------------------------------------------------------------------


def independence_ratio(X, Y):
    """Smallest over largest singular value of each stacked 2 x d pair."""
    X = np.atleast_2d(X)
    Y = np.atleast_2d(Y)
    s = np.linalg.svd(np.stack([X, Y], axis=1), compute_uv=False)
    return np.where(s[:, 0] > 0, s[:, 1] / np.where(s[:, 0] > 0, s[:, 0], 1.0), 0.0)


def orthogonality_defect(rel, X, Y):
    """Vectorised defect of ``x_i ⊥ y_i`` for every row; zero means orthogonal.

    * inner product: ``|<x,y>| / (|x| |y|)``
    * A-orthogonality: ``|<Ax,y>| / (|Ax| |y|)`` (zero when ``Ax = 0``)
    * Birkhoff-James: ``(||x|| - min_lam ||x + lam y||) / ||x||``
    * trivial: 0 if either vector is zero or the pair is independent, else 1
    """
    X = as_points(X, "X", rel.dim)
    Y = as_points(Y, "Y", X.shape[1])
    if X.shape != Y.shape:
        raise ValueError(f"dimension mismatch: {X.shape} vs {Y.shape}")
    if rel.kind == "birkhoff_james":
        return _bj_defect(rel.norm, X, Y)
    zero = ~np.any(X, axis=1) | ~np.any(Y, axis=1)
    if rel.kind == "trivial":
        indep = independence_ratio(X, Y) > rel.rank_tol
        return np.where(zero | indep, 0.0, 1.0)
    left = X @ rel.matrix.T if rel.kind == "a_orthogonality" else X
    scale = np.linalg.norm(left, axis=1) * np.linalg.norm(Y, axis=1)
    ip = np.abs(np.einsum("ij,ij->i", left, Y))
    return np.where(scale > 0, ip / np.where(scale > 0, scale, 1.0), 0.0)


def is_orthogonal(rel, x, y):
    """Decide ``x ⊥ y`` under ``rel`` (zero is orthogonal to everything)."""
    x = as_vector(x, "x", rel.dim)
    y = as_vector(y, "y", x.shape[0])
    return bool(orthogonality_defect(rel, x, y)[0] <= rel.tolerance)


# -- Thalesian property (O4) ---------------------------------------------------


def thales_residual(rel, x, y0, lam):
    """Sum of the defects of ``x ⊥ y0`` and ``x + y0 ⊥ lam*x - y0``."""
    x = as_vector(x)
    y0 = as_vector(y0, "y0", x.shape[0])
    d = orthogonality_defect(rel, np.vstack([x, x + y0]), np.vstack([y0, lam * x - y0]))
    return float(d.sum())


def _angle_dirs(theta, E1, E2):
    return np.cos(theta)[..., None] * E1 + np.sin(theta)[..., None] * E2


def _bj_orthogonal_directions(norm, X, E2, rng=None, n_grid=_THETA_GRID):
    """For each row ``x`` a unit direction ``u`` in ``span(x, e2)`` with ``x ⊥_BJ u``.

    Angles are scanned on a half-circle grid. Rows with exactly orthogonal
    grid directions pick one of them (at random when ``rng`` is given,
    otherwise the middle one); the others refine the best grid angle by
    golden-section search.
    """
    m, d = X.shape
    E1 = X / np.linalg.norm(X, axis=1, keepdims=True)
    theta = np.pi * np.arange(n_grid) / n_grid
    U = _angle_dirs(theta[None, :], E1[:, None, :], E2[:, None, :])  # (m, K, d)
    Xr = np.broadcast_to(X[:, None, :], U.shape)
    g = _bj_defect(norm, Xr.reshape(-1, d), U.reshape(-1, d)).reshape(m, n_grid)
    out = np.empty_like(X)
    exact = g <= 0.0
    has = exact.any(axis=1)
    for i in np.flatnonzero(has):
        ks = np.flatnonzero(exact[i])
        k = ks[rng.integers(len(ks))] if rng is not None else ks[len(ks) // 2]
        out[i] = U[i, k]
    rows = np.flatnonzero(~has)
    if rows.size:
        k = np.argmin(g[rows], axis=1)
        step = np.pi / n_grid
        t = _zoom_rows(
            lambda T: _bj_defect(
                norm,
                np.repeat(X[rows], T.shape[1], axis=0),
                _angle_dirs(T, E1[rows][:, None, :], E2[rows][:, None, :]).reshape(-1, d),
            ).reshape(T.shape),
            theta[k] - step,
            theta[k] + step,
            target=1e-13,
        )
        out[rows] = _angle_dirs(t, E1[rows], E2[rows])
    return out


def _zoom_rows(f, lo, hi, target, n=17, max_levels=16):
    """Row-wise repeated grid refinement; ``f`` maps (rows, n) parameters to values."""
    lo = np.asarray(lo, dtype=np.float64).copy()
    hi = np.asarray(hi, dtype=np.float64).copy()
    r = np.arange(len(lo))
    best_t, best_v = lo.copy(), np.full(len(lo), np.inf)
    for _ in range(max_levels):
        ts = lo[:, None] + np.linspace(0.0, 1.0, n)[None, :] * (hi - lo)[:, None]
        vs = f(ts)
        k = np.argmin(vs, axis=1)
        better = vs[r, k] < best_v
        best_t = np.where(better, ts[r, k], best_t)
        best_v = np.where(better, vs[r, k], best_v)
        if np.all(best_v <= target):
            break
        lo, hi = ts[r, np.maximum(k - 1, 0)], ts[r, np.minimum(k + 1, n - 1)]
    return best_t


def _bj_direction_candidates(norm, x, e2, n_grid=_THETA_GRID, max_cands=9):
    """Candidate BJ-orthogonal directions for one ``x``: both signs, spread over the arc."""
    E1 = (x / np.linalg.norm(x))[None, :]
    theta = np.pi * np.arange(n_grid) / n_grid
    U = _angle_dirs(theta, E1, e2[None, :])
    g = _bj_defect(norm, np.broadcast_to(x, U.shape), U)
    ks = np.flatnonzero(g <= 0.0)
    if ks.size:
        pick = np.unique(np.linspace(0, ks.size - 1, min(max_cands, ks.size)).round().astype(int))
        U = U[ks[pick]]
    else:
        U = _bj_orthogonal_directions(norm, x[None, :], e2[None, :], n_grid=n_grid)
    return np.vstack([U, -U])


def _zoom_min(f, lo, hi, target, n=33, max_levels=12):
    """Repeated grid refinement of a 1-D function on ``[lo, hi]``; tolerates kinks."""
    best_t, best_v = lo, np.inf
    for _ in range(max_levels):
        ts = np.linspace(lo, hi, n)
        vs = f(ts)
        k = int(np.argmin(vs))
        if vs[k] < best_v:
            best_t, best_v = ts[k], vs[k]
        if best_v <= target:
            break
        lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, n - 1)]
        if hi - lo <= 1e-15 * (1.0 + abs(hi)):
            break
    return best_t, best_v


def _bj_thales(rel, x, lam, plane, n_starts=3, widen=(1.0, 2.0, 4.0)):
    norm = rel.norm
    _, e2 = plane_basis(x, plane)
    U = _bj_direction_candidates(norm, x, e2)
    nx = norm_eval(norm, x)
    t_base = 4.0 * math.sqrt(lam + 1.0) * nx / norm_eval(norm, U)
    C, d = U.shape
    target = 0.1 * THALES_TOL

    def phi(T, Ur):
        P = x + T[:, None] * Ur
        Q = lam * x - T[:, None] * Ur
        return _bj_defect(norm, P, Q) + _bj_defect(norm, np.broadcast_to(x, P.shape), Ur)

    frac = np.linspace(0.0, 1.0, _T_SCAN)
    best_y, best_v = None, np.inf
    # the scan range is a heuristic; widen it when the solution lies beyond
    for w in widen:
        grid = frac[None, :] * (w * t_base)[:, None]
        vals = phi(grid.ravel(), np.repeat(U, _T_SCAN, axis=0)).reshape(C, _T_SCAN)
        for flat in np.argsort(vals, axis=None)[:n_starts]:
            c, k = divmod(int(flat), _T_SCAN)
            lo, hi = grid[c, max(k - 1, 0)], grid[c, min(k + 1, _T_SCAN - 1)]
            u = U[c]
            t, v = _zoom_min(lambda T: phi(T, np.broadcast_to(u, (len(T), d))), lo, hi, target)
            if v < best_v:
                best_y, best_v = t * u, v
            if best_v <= target:
                return best_y, float(best_v)
    return best_y, float(best_v)


def thales_solve(rel, x, lam, plane):
    """Find ``y0`` in ``span(plane)`` with ``x ⊥ y0`` and ``x+y0 ⊥ lam*x-y0``.

    Inner product: closed form ``y0 = sqrt(lam) |x| u``. A-orthogonality:
    closed form along the in-plane A-orthogonal direction. Trivial: any
    vector independent of ``x``. Birkhoff-James: angle search for a
    BJ-orthogonal direction followed by a scan and golden-section
    refinement of the step length. Raises :class:`SearchFailed` when the
    residual cannot be brought below 1e-8.
    """
    x = as_vector(x, "x", rel.dim)
    lam = float(lam)
    if not lam >= 0:
        raise ValueError("lambda must be nonnegative")
    if not np.any(x):
        raise ValueError("x must be nonzero")
    e1, e2 = plane_basis(x, plane)
    xn = np.linalg.norm(x)
    if rel.kind == "inner_product":
        y0 = math.sqrt(lam) * xn * e2
    elif rel.kind == "trivial":
        y0 = xn * e2
    elif rel.kind == "a_orthogonality":
        ax = rel.matrix @ x
        v = (ax @ e2) * e1 - (ax @ e1) * e2
        if not np.any(v):
            v = e2
        v = v / np.linalg.norm(v)
        num, den = lam * (ax @ x), v @ rel.matrix @ v
        if num == 0.0:
            y0 = 0.0 * v
        elif den == 0.0 or num / den < 0:
            raise SearchFailed("no A-orthogonal Thales point in this plane")
        else:
            y0 = math.sqrt(num / den) * v
    else:
        y0, _ = _bj_thales(rel, x, lam, plane)
        # prefer the solution on the e2 side, as the closed forms do
        if y0 @ e2 < 0 and thales_residual(rel, x, -y0, lam) <= THALES_TOL:
            y0 = -y0
    res = thales_residual(rel, x, y0, lam)
    if not res <= THALES_TOL:
        raise SearchFailed(f"Thales search residual {res:.3e} exceeds {THALES_TOL}")
    return y0


# -- sampling --------------------------------------------------------------------


class PairSampler:
    """Seeded source of random vectors, planes and scalars.

    Radii are log-uniform in ``radius_range``. Identical seeds give identical
    streams; :meth:`spawn` derives independent child streams by index.
    """

    def __init__(self, seed=0, dim=2, radius_range=(0.1, 10.0), _key=()):
        lo, hi = radius_range
        if not 0 < lo <= hi:
            raise ValueError("radius_range must satisfy 0 < lo <= hi")
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.seed = int(seed)
        self.dim = int(dim)
        self.radius_range = (float(lo), float(hi))
        self._key = tuple(_key)
        self.rng = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=self._key))

    def __repr__(self):
        return f"PairSampler(seed={self.seed}, dim={self.dim}, key={self._key})"

    def spawn(self, index):
        return PairSampler(self.seed, self.dim, self.radius_range, self._key + (int(index),))

    def log_uniform(self, lo, hi, size=None):
        return np.exp(self.rng.uniform(math.log(lo), math.log(hi), size))

    def radii(self, n):
        return self.log_uniform(*self.radius_range, n)

    def directions(self, n):
        z = self.rng.standard_normal((n, self.dim))
        return z / np.linalg.norm(z, axis=1, keepdims=True)

    def vectors(self, n):
        return self.directions(n) * self.radii(n)[:, None]

    def nonzero_scalars(self, n, bound=8.0):
        s = self.rng.uniform(-bound, bound, n)
        s[s == 0.0] = bound
        return s


def _project_off(X, V, W):
    """Remove from each row of ``V`` its component along the matching row of ``W``."""
    ww = np.einsum("ij,ij->i", W, W)
    coef = np.where(ww > 0, np.einsum("ij,ij->i", V, W) / np.where(ww > 0, ww, 1.0), 0.0)
    return V - coef[:, None] * W


def _bj_pairs(rel, sampler, n, budget):
    X = np.empty((0, sampler.dim))
    Y = np.empty((0, sampler.dim))
    for _ in range(budget):
        if len(X) >= n:
            break
        m = n - len(X)
        xs = sampler.vectors(m)
        vs = sampler.directions(m)
        e2 = _project_off(xs, vs, xs)
        e2 /= np.linalg.norm(e2, axis=1, keepdims=True)
        us = _bj_orthogonal_directions(rel.norm, xs, e2, sampler.rng)
        us /= norm_eval(rel.norm, us)[:, None]
        ys = us * sampler.radii(m)[:, None]
        ok = orthogonality_defect(rel, xs, ys) <= rel.tolerance
        X = np.vstack([X, xs[ok]])
        Y = np.vstack([Y, ys[ok]])
    if len(X) < n:
        raise SearchFailed("Birkhoff-James pair sampling exhausted its budget")
    return X[:n], Y[:n]


def sample_orthogonal_pairs(rel, sampler, n, budget=20):
    """Draw ``n`` pairs ``(x_i, y_i)`` with ``x_i ⊥ y_i``; returns two (n, d) arrays."""
    if rel.dim is not None and rel.dim != sampler.dim:
        raise ValueError(f"sampler dim {sampler.dim} does not match relation dim {rel.dim}")
    if rel.kind == "birkhoff_james":
        return _bj_pairs(rel, sampler, n, budget)
    X = sampler.vectors(n)
    V = sampler.directions(n)
    if rel.kind == "trivial":
        for _ in range(budget):
            bad = independence_ratio(X, V) <= rel.rank_tol
            if not bad.any():
                break
            V[bad] = sampler.directions(int(bad.sum()))
        else:
            raise SearchFailed("could not draw independent pairs")
        Y = V
    else:
        W = X @ rel.matrix.T if rel.kind == "a_orthogonality" else X
        Y = _project_off(X, V, W)
        # double projection removes the rounding left by the first pass
        Y = _project_off(X, Y, W)
        yn = np.linalg.norm(Y, axis=1)
        Y = np.where(yn[:, None] > 0, Y / np.where(yn > 0, yn, 1.0)[:, None], V)
    return X, Y * sampler.radii(n)[:, None]


def sample_orthogonal_pair(rel, sampler):
    X, Y = sample_orthogonal_pairs(rel, sampler, 1)
    return X[0], Y[0]


def random_planes_through(X, sampler):
    """For each row ``x`` return a plane ``(x, v)`` with ``v`` a random independent direction."""
    V = _project_off(X, sampler.directions(len(X)), X)
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    return [(x, v) for x, v in zip(X, V)]


def symmetry_probe(rel, sampler, n_samples, chunk=256):
    """Return the first sampled ``(x, y)`` with ``x ⊥ y`` but not ``y ⊥ x``, else None."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        X, Y = sample_orthogonal_pairs(rel, sampler, m)
        bad = np.flatnonzero(orthogonality_defect(rel, Y, X) > rel.tolerance)
        if bad.size:
            i = bad[0]
            return X[i], Y[i]
        done += m
    return None


# -- axiom suite -------------------------------------------------------------------


@dataclass
class AxiomResult:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    max_residual: float = 0.0
    tolerance: float = 0.0
    search_failures: int = 0

    @property
    def passed(self):
        return not self.violations

    def record(self, residual, witness, violated):
        self.checked += 1
        self.max_residual = max(self.max_residual, float(residual))
        if violated:
            self.violations.append(witness)

    def to_dict(self):
        return {
            "name": self.name,
            "checked": self.checked,
            "violations": [_jsonable(w) for w in self.violations],
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "search_failures": self.search_failures,
        }


@dataclass
class AxiomReport:
    relation: dict
    dim: int
    seed: int
    axioms: dict

    @property
    def passed(self):
        return all(a.passed for a in self.axioms.values())

    @property
    def n_violations(self):
        return sum(len(a.violations) for a in self.axioms.values())

    def to_dict(self):
        return {
            "relation": self.relation,
            "dim": self.dim,
            "seed": self.seed,
            "passed": self.passed,
            "axioms": {k: v.to_dict() for k, v in self.axioms.items()},
        }


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (tuple, list)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def axiom_suite(rel, sampler, n_samples, axioms=("O1", "O2", "O3", "O4")):
    """Check the orthogonality-space axioms on random samples.

    Failures are report content, never exceptions. O4 search failures are
    counted separately and do not count as violations.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    tol = rel.tolerance
    results = {}
    if "O1" in axioms:
        r = AxiomResult("O1", tolerance=tol)
        X = sampler.spawn(1).vectors(n_samples)
        Z = np.zeros_like(X)
        d1 = orthogonality_defect(rel, X, Z)
        d2 = orthogonality_defect(rel, Z, X)
        for x, a, b in zip(X, d1, d2):
            res = max(a, b)
            r.record(res, {"x": x}, res > tol)
        results["O1"] = r
    if "O2" in axioms or "O3" in axioms:
        X, Y = sample_orthogonal_pairs(rel, sampler.spawn(2), n_samples)
    if "O2" in axioms:
        r = AxiomResult("O2", tolerance=0.0)
        ratio = independence_ratio(X, Y)
        for x, y, q in zip(X, Y, ratio):
            r.record(max(0.0, rel.rank_tol - q), {"x": x, "y": y}, not q > rel.rank_tol)
        results["O2"] = r
    if "O3" in axioms:
        r = AxiomResult("O3", tolerance=tol)
        s = sampler.spawn(3)
        a = s.nonzero_scalars(n_samples)
        b = s.nonzero_scalars(n_samples)
        d = orthogonality_defect(rel, a[:, None] * X, b[:, None] * Y)
        for x, y, al, be, res in zip(X, Y, a, b, d):
            r.record(res, {"x": x, "y": y, "alpha": al, "beta": be}, res > tol)
        results["O3"] = r
    if "O4" in axioms:
        r = AxiomResult("O4", tolerance=THALES_TOL)
        s = sampler.spawn(4)
        X4 = s.vectors(n_samples)
        lams = s.log_uniform(0.01, 100.0, n_samples)
        for x, lam, plane in zip(X4, lams, random_planes_through(X4, s)):
            try:
                y0 = thales_solve(rel, x, lam, plane)
            except SearchFailed:
                r.search_failures += 1
                continue
            res = thales_residual(rel, x, y0, lam)
            r.record(res, {"x": x, "lambda": lam, "y0": y0}, res > THALES_TOL)
        results["O4"] = r
    return AxiomReport(rel.to_dict(), sampler.dim, sampler.seed, results)
