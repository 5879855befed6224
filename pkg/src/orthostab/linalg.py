"""Small dense real linear algebra: norms, inner products, plane complements
and a golden-section line search.

Every function accepts plain sequences or numpy arrays. Norms are batched
over the last axis so that searches can evaluate many candidates at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_vector

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

NORM_KINDS = ("L2", "Lp", "LInf", "L1", "Weighted")


@dataclass(frozen=True)
class NormSpec:
    """A norm on R^d.

    ``kind`` is one of ``L2``, ``Lp``, ``LInf``, ``L1`` or ``Weighted``.
    ``Lp`` needs ``p >= 1``. ``Weighted`` evaluates ``base`` at ``weights * x``.
    """

    kind: str = "L2"
    p: float | None = None
    weights: tuple[float, ...] | None = None
    base: "NormSpec | None" = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in NORM_KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "Lp":
            if self.p is None or not self.p >= 1.0 or not math.isfinite(self.p):
                raise ValueError("Lp norm requires finite p >= 1")
        if self.kind == "Weighted":
            if not self.weights:
                raise ValueError("Weighted norm requires weights")
            w = tuple(float(v) for v in self.weights)
            if any(not (v > 0 and math.isfinite(v)) for v in w):
                raise ValueError("weights must be strictly positive and finite")
            object.__setattr__(self, "weights", w)
            if self.base is None:
                object.__setattr__(self, "base", NormSpec("L2"))
            elif self.base.kind == "Weighted":
                raise ValueError("nested Weighted norms are not supported")

    @classmethod
    def lp(cls, p):
        p = float(p)
        if p == 1.0:
            return cls("L1")
        if p == 2.0:
            return cls("L2")
        if math.isinf(p):
            return cls("LInf")
        return cls("Lp", p=p)

    @classmethod
    def weighted(cls, weights, base=None):
        return cls("Weighted", weights=tuple(weights), base=base)

    def __call__(self, x):
        return norm_eval(self, x)

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "Lp":
            d["p"] = self.p
        if self.kind == "Weighted":
            d["weights"] = list(self.weights)
            d["base"] = self.base.to_dict()
        return d

    @classmethod
    def from_dict(cls, d):
        kind = d["kind"]
        if kind == "Weighted":
            base = cls.from_dict(d["base"]) if d.get("base") else None
            return cls("Weighted", weights=tuple(d["weights"]), base=base)
        if kind == "Lp":
            return cls("Lp", p=float(d["p"]))
        return cls(kind)


def norm_eval(norm, x):
    """Evaluate ``norm`` along the last axis of ``x``.

    Returns a float for a 1-D input and an array for batched input.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        raise ValueError("norm_eval needs at least a 1-D input")
    if norm.kind == "Weighted":
        w = np.asarray(norm.weights)
        if arr.shape[-1] != w.shape[0]:
            raise ValueError(
                f"dimension mismatch: vector has {arr.shape[-1]} coordinates, "
                f"weights have {w.shape[0]}"
            )
        return norm_eval(norm.base, arr * w)
    a = np.abs(arr)
    if norm.kind == "L1":
        out = np.sum(a, axis=-1)
    elif norm.kind == "LInf":
        out = np.max(a, axis=-1)
    else:
        # scale by the largest entry so powers neither overflow nor underflow
        p = 2.0 if norm.kind == "L2" else norm.p
        m = np.max(a, axis=-1, keepdims=True)
        r = a / np.where(m > 0, m, 1.0)
        s = np.sum(r * r, axis=-1) if p == 2.0 else np.sum(r**p, axis=-1)
        out = m[..., 0] * (np.sqrt(s) if p == 2.0 else s ** (1.0 / p))
    return float(out) if np.ndim(out) == 0 else out


def dot(x, y):
    """Euclidean inner product of two vectors of equal dimension."""
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    return float(x @ y)


def _canonical_sign(u, tol=1e-12):
    for c in u:
        if abs(c) > tol:
            return u if c > 0 else -u
    return u


def orthonormal_complement_in_plane(x, plane, tol=1e-10):
    """Unit vector in ``span(plane)`` Euclidean-orthogonal to ``x``.

    The sign is fixed so that the first nonzero coordinate is positive.
    """
    x = as_vector(x)
    b1 = as_vector(plane[0], "plane[0]", x.shape[0])
    b2 = as_vector(plane[1], "plane[1]", x.shape[0])
    basis = np.vstack([b1, b2])
    s = np.linalg.svd(basis, compute_uv=False)
    if s[0] == 0.0 or s[1] <= tol * s[0]:
        raise ValueError("degenerate plane: basis vectors are (nearly) dependent")
    xn = np.linalg.norm(x)
    if xn == 0.0:
        raise ValueError("x must be nonzero")
    q, _ = np.linalg.qr(basis.T)  # columns: orthonormal basis of the plane
    coef = q.T @ x
    if np.linalg.norm(x - q @ coef) > tol * xn:
        raise ValueError("x does not lie in the plane")
    # rotate the in-plane coordinates of x by 90 degrees
    u = q @ np.array([-coef[1], coef[0]])
    u /= np.linalg.norm(u)
    u -= (u @ x) / (xn * xn) * x
    u /= np.linalg.norm(u)
    return _canonical_sign(u)


def plane_basis(x, plane):
    """Return ``(e1, e2)``: ``x`` normalised and its in-plane complement."""
    x = as_vector(x)
    e1 = x / np.linalg.norm(x)
    return e1, orthonormal_complement_in_plane(x, plane)


def golden_section(func, a, b, tol):
    """Minimise a unimodal scalar function on ``[a, b]``.

    Returns ``(t_best, f_best)`` over all evaluated points, including both
    endpoints. The bracket shrinks until its width is at most ``tol``.
    """
    a, b = min(a, b), max(a, b)
    fa, fb = func(a), func(b)
    best_t, best_f = (a, fa) if fa <= fb else (b, fb)
    h = b - a
    if h <= tol:
        return best_t, best_f
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = func(c), func(d)
    while h > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + INV_PHI2 * h
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INV_PHI * h
            fd = func(d)
        for t, f in ((c, fc), (d, fd)):
            if f < best_f:
                best_t, best_f = t, f
    return best_t, best_f


def golden_section_batch(func, a, b, tol):
    """Vectorised golden-section search: one independent bracket per row.

    ``func`` maps an array of parameters of shape ``(n,)`` to values of the
    same shape. ``a``, ``b`` and ``tol`` broadcast to ``(n,)``.
    """
    a = np.asarray(a, dtype=np.float64).copy()
    b = np.asarray(b, dtype=np.float64).copy()
    tol = np.broadcast_to(np.asarray(tol, dtype=np.float64), a.shape)
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    fa, fb = func(lo), func(hi)
    best_t = np.where(fa <= fb, lo, hi)
    best_f = np.minimum(fa, fb)
    h = hi - lo
    width0 = np.max(h / np.maximum(tol, 1e-300), initial=1.0)
    n_iter = int(math.ceil(math.log(max(width0, 1.0)) / -math.log(INV_PHI))) + 1
    c = lo + INV_PHI2 * h
    d = lo + INV_PHI * h
    fc, fd = func(c), func(d)
    for _ in range(n_iter):
        left = fc < fd
        lo = np.where(left, lo, c)
        hi = np.where(left, d, hi)
        fresh = np.where(left, lo + INV_PHI2 * (hi - lo), lo + INV_PHI * (hi - lo))
        fp = func(fresh)
        c, d = np.where(left, fresh, d), np.where(left, c, fresh)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
    for t, f in ((c, fc), (d, fd)):
        better = f < best_f
        best_t = np.where(better, t, best_t)
        best_f = np.where(better, f, best_f)
    return best_t, best_f
