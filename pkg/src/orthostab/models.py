"""Concrete maps X -> R^m: linear part + quadratic part + hashed bounded noise.

Noise is a pure function of the bit pattern of its argument, so a model is
a genuine function (the Hyers iteration needs that) and evaluations are
reproducible across runs and machines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_matrix, as_points
from .orthogonality import OrthoRelation

PARITIES = ("none", "odd", "even")

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(z):
    # splitmix64 finaliser on uint64 arrays (wrapping arithmetic)
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def hash_unit(seed, X, out_dim):
    """Stable hash of ``(seed, output index, bits of x)`` scaled to ``[0, 1)``.

    Returns an array of shape ``(n, out_dim)``. Negative zero is hashed as
    zero.
    """
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64) + 0.0)
    bits = X.view(np.uint64)
    n, d = X.shape
    h = _mix(np.full(n, np.uint64(int(seed) & _MASK64)) ^ _GOLDEN)
    for j in range(d):
        h = _mix(h ^ _mix(bits[:, j] + np.uint64((0x9E3779B97F4A7C15 * (j + 1)) & _MASK64)))
    k = np.arange(1, out_dim + 1, dtype=np.uint64)
    u = _mix(h[:, None] + _GOLDEN * k[None, :]) >> np.uint64(11)
    return u.astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class NoiseSpec:
    amplitude: float
    seed: int = 0
    parity: str = "none"

    def __post_init__(self):
        if not self.amplitude >= 0:
            raise ValueError("noise amplitude must be nonnegative")
        if self.parity not in PARITIES:
            raise ValueError(f"unknown parity {self.parity!r}")

    def to_dict(self):
        return {"amplitude": self.amplitude, "seed": self.seed, "parity": self.parity}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["amplitude"]), int(d.get("seed", 0)), d.get("parity", "none"))


def deterministic_noise(spec, X, out_dim=1):
    """Bounded hashed noise ``eta(x)`` with ``|eta(x)|_inf <= amplitude``.

    Odd and even variants are the antisymmetrisation and symmetrisation of
    the raw hash, so the parity identities hold exactly.
    """
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if spec.amplitude == 0.0:
        out = np.zeros((len(X), out_dim))
    else:

        def raw(P):
            return np.clip(spec.amplitude * (2.0 * hash_unit(spec.seed, P, out_dim) - 1.0),
                           -spec.amplitude, spec.amplitude)

        out = raw(X)
        if spec.parity == "odd":
            out = (out - raw(-X)) / 2.0
        elif spec.parity == "even":
            out = (out + raw(-X)) / 2.0
    return out[0] if single else out


@dataclass(frozen=True, eq=False)
class MapModel:
    """``x -> linear @ x + [x^T B_k x]_k + offset + noise(x)``, then a parity filter.

    Parts that are ``None`` contribute nothing. ``quad`` has shape
    ``(out_dim, dim, dim)`` with symmetric slices. Calling the model on a
    vector returns a vector; on an ``(n, dim)`` array it returns ``(n, out_dim)``.
    """

    dim: int
    out_dim: int = 1
    linear: np.ndarray | None = field(default=None, repr=False)
    quad: np.ndarray | None = field(default=None, repr=False)
    offset: np.ndarray | None = field(default=None, repr=False)
    noise: NoiseSpec | None = None
    parity: str = "none"

    def __post_init__(self):
        if self.dim < 1 or self.out_dim < 1:
            raise ValueError("dimensions must be positive")
        if self.parity not in PARITIES:
            raise ValueError(f"unknown parity {self.parity!r}")
        if self.linear is not None:
            L = as_matrix(self.linear, "linear")
            if L.shape != (self.out_dim, self.dim):
                raise ValueError(f"linear part has shape {L.shape}, expected {(self.out_dim, self.dim)}")
            object.__setattr__(self, "linear", _frozen(L))
        if self.quad is not None:
            Q = np.asarray(self.quad, dtype=np.float64)
            if Q.shape != (self.out_dim, self.dim, self.dim):
                raise ValueError(f"quadratic part has shape {Q.shape}, expected {(self.out_dim, self.dim, self.dim)}")
            if not np.all(np.isfinite(Q)) or np.max(np.abs(Q - Q.transpose(0, 2, 1))) > 1e-12:
                raise ValueError("quadratic forms must be finite and symmetric")
            object.__setattr__(self, "quad", _frozen(Q))
        if self.offset is not None:
            c = np.asarray(self.offset, dtype=np.float64).reshape(-1)
            if c.shape != (self.out_dim,) or not np.all(np.isfinite(c)):
                raise ValueError("offset must be a finite vector of length out_dim")
            object.__setattr__(self, "offset", _frozen(c))

    @classmethod
    def from_linear(cls, L, **kw):
        L = np.atleast_2d(np.asarray(L, dtype=np.float64))
        return cls(dim=L.shape[1], out_dim=L.shape[0], linear=L, **kw)

    @classmethod
    def from_forms(cls, forms, **kw):
        Q = np.asarray(forms, dtype=np.float64)
        if Q.ndim == 2:
            Q = Q[None]
        return cls(dim=Q.shape[1], out_dim=Q.shape[0], quad=Q, **kw)

    @classmethod
    def squared_norm(cls, dim, **kw):
        """``x -> |x|_2^2`` as a single identity form."""
        return cls.from_forms(np.eye(dim)[None], **kw)

    @property
    def is_pure_quadratic(self):
        return self.quad is not None and self.linear is None and self.offset is None and self.noise is None

    def _raw(self, X):
        out = np.zeros((len(X), self.out_dim))
        if self.linear is not None:
            out += X @ self.linear.T
        if self.quad is not None:
            out += np.einsum("ni,kij,nj->nk", X, self.quad, X)
        if self.offset is not None:
            out += self.offset
        if self.noise is not None:
            out += deterministic_noise(self.noise, X, self.out_dim)
        return out

    def __call__(self, X):
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        X = as_points(X, "x", self.dim)
        out = self._raw(X)
        if self.parity == "odd":
            out = (out - self._raw(-X)) / 2.0
        elif self.parity == "even":
            out = (out + self._raw(-X)) / 2.0
        return out[0] if single else out

    eval = __call__

    def to_dict(self):
        d = {"dim": self.dim, "out_dim": self.out_dim, "parity": self.parity}
        if self.linear is not None:
            d["linear"] = self.linear.tolist()
        if self.quad is not None:
            d["quad"] = self.quad.tolist()
        if self.offset is not None:
            d["offset"] = self.offset.tolist()
        if self.noise is not None:
            d["noise"] = self.noise.to_dict()
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            dim=int(d["dim"]),
            out_dim=int(d.get("out_dim", 1)),
            linear=d.get("linear"),
            quad=d.get("quad"),
            offset=d.get("offset"),
            noise=NoiseSpec.from_dict(d["noise"]) if d.get("noise") else None,
            parity=d.get("parity", "none"),
        )


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def polarize(model, x, y):
    """Bilinear form recovered from a quadratic map: ``(Q(x+y) - Q(x-y)) / 4``."""
    if not model.is_pure_quadratic or model.parity == "odd":
        raise ValueError("polarize needs a model with a quadratic part only")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return (model(x + y) - model(x - y)) / 4.0


def bilinear(model, x, y):
    """Direct evaluation of the stored symmetric forms ``[x^T B_k y]_k``."""
    return np.einsum("i,kij,j->k", np.asarray(x, float), model.quad, np.asarray(y, float))


@dataclass(frozen=True, eq=False)
class PexiderTriple:
    """Maps ``f, g, h`` for ``f(x+y) + f(x-y) = 2g(x) + 2h(y)`` on orthogonal pairs."""

    f: MapModel
    g: MapModel
    h: MapModel
    epsilon_design: float
    relation: OrthoRelation

    def __post_init__(self):
        dims = {self.f.dim, self.g.dim, self.h.dim}
        outs = {self.f.out_dim, self.g.out_dim, self.h.out_dim}
        if len(dims) != 1 or len(outs) != 1:
            raise ValueError("f, g and h must share domain and codomain dimensions")
        if self.relation.dim is not None and self.relation.dim != self.f.dim:
            raise ValueError("relation dimension does not match the maps")

    @property
    def dim(self):
        return self.f.dim

    @property
    def out_dim(self):
        return self.f.out_dim

    def premise_residual(self, X, Y):
        """Row-wise sup-norm of ``f(x+y) + f(x-y) - 2g(x) - 2h(y)``."""
        r = self.f(X + Y) + self.f(X - Y) - 2.0 * self.g(X) - 2.0 * self.h(Y)
        return np.max(np.abs(np.atleast_2d(r)), axis=1)

    def to_dict(self):
        return {
            "f": self.f.to_dict(),
            "g": self.g.to_dict(),
            "h": self.h.to_dict(),
            "epsilon_design": self.epsilon_design,
            "relation": self.relation.to_dict(),
        }

    @classmethod
    def from_dict(cls, d, relation=None):
        rel = relation if relation is not None else OrthoRelation.from_dict(d["relation"])
        return cls(
            MapModel.from_dict(d["f"]),
            MapModel.from_dict(d["g"]),
            MapModel.from_dict(d["h"]),
            float(d["epsilon_design"]),
            rel,
        )


def make_pexider_instance(Tstar, eps_f, eps_g, eps_h, seeds, rel):
    """Odd approximate solution around the additive map ``Tstar``.

    ``f = Tstar + odd noise``, ``g = Tstar + noise``, ``h = noise``. The exact
    parts cancel in the premise, which is therefore bounded by
    ``2 eps_f + 2 eps_g + 2 eps_h``.
    """
    for e in (eps_f, eps_g, eps_h):
        if not e >= 0:
            raise ValueError("noise amplitudes must be nonnegative")
    T = np.atleast_2d(np.asarray(Tstar, dtype=np.float64))
    m, d = T.shape
    sf, sg, sh = (int(s) for s in seeds)
    f = MapModel(d, m, linear=T, noise=NoiseSpec(eps_f, sf, "odd"), parity="odd")
    g = MapModel(d, m, linear=T, noise=NoiseSpec(eps_g, sg, "none"))
    h = MapModel(d, m, noise=NoiseSpec(eps_h, sh, "none"))
    return PexiderTriple(f, g, h, 2.0 * eps_f + 2.0 * eps_g + 2.0 * eps_h, rel)


class FiniteModel:
    """A ``Z_2``-valued table on the integer grid ``{-r..r}^2``."""

    def __init__(self, radius, table=None):
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        self.radius = int(radius)
        side = 2 * self.radius + 1
        self.table = (np.ones((side, side), dtype=np.int64) if table is None
                      else np.asarray(table, dtype=np.int64) % 2)
        if self.table.shape != (side, side):
            raise ValueError("table shape does not match the grid")

    @classmethod
    def constant(cls, radius, value=1):
        side = 2 * int(radius) + 1
        return cls(radius, np.full((side, side), value % 2))

    def points(self):
        r = np.arange(-self.radius, self.radius + 1)
        gx, gy = np.meshgrid(r, r, indexing="ij")
        return np.stack([gx.ravel(), gy.ravel()], axis=1)

    def __call__(self, P):
        P = np.asarray(P, dtype=np.int64)
        if np.any(np.abs(P) > self.radius):
            raise KeyError("point outside the finite grid")
        return self.table[P[..., 0] + self.radius, P[..., 1] + self.radius]
