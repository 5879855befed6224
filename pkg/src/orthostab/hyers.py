"""Hyers sequences ``base^-n f(2^n x)`` and what is built from their limits.

Distances in the codomain R^m are measured in the sup norm throughout.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_points, as_vector
from .orthogonality import sample_orthogonal_pairs

OVERFLOW_GUARD = 1e300
_SCALING_BASE = {"additive": 2.0, "quadratic": 4.0}


class DivergenceError(RuntimeError):
    code = "DIVERGED"


def sup_norm(V):
    V = np.asarray(V, dtype=np.float64)
    return np.max(np.abs(V), axis=-1)


@dataclass
class HyersTrace:
    """Iterates of one Hyers run at one point.

    ``deltas[i]`` is the distance between iterate ``i+1`` and iterate ``i``.
    ``limit`` is the last iterate unless the run diverged.
    """

    x: np.ndarray
    scaling: str
    ns: np.ndarray
    values: np.ndarray
    deltas: np.ndarray
    verdict: str
    stop_n: int
    stop_tol: float
    tail_bound: float | None = None
    diagnostic: str = ""

    @property
    def limit(self):
        return None if self.verdict == "diverged" else self.values[-1]

    @property
    def iterates(self):
        return list(zip(self.ns.tolist(), self.values))

    def to_dict(self):
        return {
            "x": self.x.tolist(),
            "scaling": self.scaling,
            "verdict": self.verdict,
            "stop_n": self.stop_n,
            "stop_tol": self.stop_tol,
            "tail_bound": self.tail_bound,
            "limit": None if self.limit is None else self.limit.tolist(),
            "iterates": [{"n": int(n), "value": v.tolist()} for n, v in zip(self.ns, self.values)],
            "deltas": self.deltas.tolist(),
            "diagnostic": self.diagnostic,
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        m = self.values.shape[1]
        w.writerow(["n"] + [f"value_{k}" for k in range(m)] + ["delta"])
        for i, n in enumerate(self.ns):
            delta = "" if i == 0 else repr(float(self.deltas[i - 1]))
            w.writerow([int(n)] + [repr(float(v)) for v in self.values[i]] + [delta])
        return buf.getvalue()


def hyers_iterates(f, X, n_max=40, scaling="additive"):
    """All iterates ``base^-n f(2^n x)`` for ``n = 0..n_max`` and every row of ``X``.

    Returns ``(values, valid)`` with shapes ``(n_max+1, N, m)`` and
    ``(n_max+1, N)``; ``valid`` is False where ``|2^n x|`` passed the overflow
    guard (those entries are NaN).
    """
    if scaling not in _SCALING_BASE:
        raise ValueError(f"unknown scaling {scaling!r}")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    base = _SCALING_BASE[scaling]
    xmax = np.max(np.abs(X), axis=1)
    out = None
    valid = np.zeros((n_max + 1, len(X)), dtype=bool)
    for n in range(n_max + 1):
        ok = xmax <= OVERFLOW_GUARD / 2.0**n
        valid[n] = ok
        if ok.any():
            v = np.atleast_2d(f(X[ok] * 2.0**n)) / base**n
            if out is None:
                out = np.full((n_max + 1, len(X), v.shape[1]), np.nan)
            out[n, ok] = v
        elif out is None:
            raise OverflowError("overflow guard tripped at n = 0")
    return out, valid


def _classify_batch(D, stop_tol):
    """Classify delta columns at once.

    ``D`` has shape ``(steps, N)``; NaN marks steps past the overflow guard.
    Returns ``(verdicts, stop_index)`` where the stop index points into the
    deltas and is ``-1`` when there are none.
    """
    steps, N = D.shape
    small = D <= stop_tol
    prefix_small = np.logical_and.accumulate(small, axis=0) if steps else small
    grow = np.zeros_like(small)
    decay = np.zeros_like(small)
    if steps >= 6:
        ratios_up = D[1:] >= 1.5 * D[:-1]
        ratios_down = D[1:] <= 0.75 * D[:-1]
        pos = D[:-1] > 0
        for i in range(5, steps):
            grow[i] = np.all(ratios_up[i - 5 : i] & pos[i - 5 : i], axis=0)
            # a single small delta can be a coincidence of the noise, so ask
            # for sustained decay over the final five steps
            decay[i] = np.all(ratios_down[i - 5 : i], axis=0)
    conv = small & (prefix_small | decay)
    event = grow | conv
    hit = event.any(axis=0)
    first = np.argmax(event, axis=0)
    valid_steps = np.sum(~np.isnan(D), axis=0)
    stop = np.where(hit, first, valid_steps - 1)
    verdicts = np.full(N, "budget_exhausted", dtype=object)
    cols = np.arange(N)
    if steps:
        verdicts[hit & grow[first, cols]] = "diverged"
        verdicts[hit & ~grow[first, cols]] = "converged"
    return verdicts, stop


def _classify(deltas, stop_tol):
    """Return ``(verdict, stop_index)`` for one delta sequence (index into deltas)."""
    v, stop = _classify_batch(np.asarray(deltas, dtype=np.float64)[:, None], stop_tol)
    return v[0], int(stop[0])


def _traces_from(X, values, valid, scaling, stop_tol, epsilon):
    base = _SCALING_BASE[scaling]
    D = sup_norm(np.diff(values, axis=0))
    verdicts, stops = _classify_batch(D, stop_tol)
    last_valid = valid.shape[0] - 1 - np.argmax(valid[::-1], axis=0)
    traces = []
    for j, x in enumerate(X):
        verdict, stop = verdicts[j], int(stops[j])
        last = int(last_valid[j])
        diagnostic = ""
        if verdict == "budget_exhausted" and last < len(valid) - 1:
            diagnostic = f"overflow guard |2^n x| <= {OVERFLOW_GUARD:g} stopped the run at n = {last}"
        stop_n = stop + 1
        tail = None if epsilon is None else 6.0 * epsilon * base**-stop_n
        traces.append(
            HyersTrace(
                x=x.copy(),
                scaling=scaling,
                ns=np.arange(stop_n + 1),
                values=values[: stop_n + 1, j].copy(),
                deltas=D[:stop_n, j].copy(),
                verdict=verdict,
                stop_n=stop_n,
                stop_tol=stop_tol,
                tail_bound=tail,
                diagnostic=diagnostic,
            )
        )
    return traces


def hyers_traces(f, X, n_max=40, stop_tol=1e-12, scaling="additive", epsilon=None):
    """Batched Hyers runs, one :class:`HyersTrace` per row of ``X``."""
    X = as_points(X)
    values, valid = hyers_iterates(f, X, n_max, scaling)
    return _traces_from(X, values, valid, scaling, stop_tol, epsilon)


def additive_hyers_limit(f, x, n_max=40, stop_tol=1e-12, epsilon=None):
    """Hyers run of ``2^-n f(2^n x)`` at one point.

    ``epsilon`` (the premise bound, when known) sets ``tail_bound = 6 eps 2^-n``.
    """
    return hyers_traces(f, as_vector(x)[None], n_max, stop_tol, "additive", epsilon)[0]


def quadratic_hyers_limit(f, x, n_max=40, stop_tol=1e-12, epsilon=None):
    """Hyers run of ``4^-n f(2^n x)`` at one point (the even-map analogue)."""
    return hyers_traces(f, as_vector(x)[None], n_max, stop_tol, "quadratic", epsilon)[0]


class HyersLimit:
    """Lazily evaluated limit map ``x -> lim base^-n f(2^n x)``.

    Calling it runs a fresh batched Hyers computation at the requested
    points and returns the stopping iterates. Divergence at any point
    raises :class:`DivergenceError`.
    """

    def __init__(self, f, n_max=40, stop_tol=1e-12, scaling="additive"):
        self.f = f
        self.n_max = n_max
        self.stop_tol = stop_tol
        self.scaling = scaling
        self.min_stop_n = None

    def traces(self, X, epsilon=None):
        return hyers_traces(self.f, X, self.n_max, self.stop_tol, self.scaling, epsilon)

    def __call__(self, X):
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        traces = self.traces(np.atleast_2d(X))
        bad = [t for t in traces if t.verdict == "diverged"]
        if bad:
            raise DivergenceError(f"Hyers sequence diverged at x = {bad[0].x.tolist()}")
        stops = min(t.stop_n for t in traces)
        self.min_stop_n = stops if self.min_stop_n is None else min(self.min_stop_n, stops)
        out = np.vstack([t.limit for t in traces])
        return out[0] if single else out


# -- residual checks -----------------------------------------------------------------


@dataclass
class ResidualResult:
    max: float
    argmax: tuple | None
    values: np.ndarray = field(repr=False)

    def to_dict(self):
        return {
            "max": self.max,
            "argmax": None if self.argmax is None else [a.tolist() for a in self.argmax],
        }


def _result(values, X, Y):
    k = int(np.argmax(values))
    return ResidualResult(float(values[k]), (X[k], Y[k]), values)


def jensen_residual(fmap, rel, sampler, n_pairs, pairs=None):
    """Max of ``|map(x+y) + map(x-y) - 2 map(x)|`` over sampled orthogonal pairs."""
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    X, Y = pairs if pairs is not None else sample_orthogonal_pairs(rel, sampler, n_pairs)
    r = sup_norm(np.atleast_2d(fmap(X + Y)) + np.atleast_2d(fmap(X - Y)) - 2.0 * np.atleast_2d(fmap(X)))
    return _result(r, X, Y)


def orthogonal_additivity_residual(fmap, rel, sampler, n_pairs, pairs=None):
    """Max of ``|a(x+y) - a(x) - a(y)|`` with ``a = map - map(0)`` over orthogonal pairs."""
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    X, Y = pairs if pairs is not None else sample_orthogonal_pairs(rel, sampler, n_pairs)
    zero = np.atleast_2d(fmap(np.zeros((1, X.shape[1]))))
    r = sup_norm(
        (np.atleast_2d(fmap(X + Y)) - zero)
        - (np.atleast_2d(fmap(X)) - zero)
        - (np.atleast_2d(fmap(Y)) - zero)
    )
    return _result(r, X, Y)


# -- T + Q decomposition -------------------------------------------------------------


@dataclass
class SampledMap:
    """Values of a map on a finite probe set closed under negation."""

    probes: np.ndarray
    values: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        self.probes = as_points(self.probes, "probes")
        self.values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        if len(self.values) != len(self.probes):
            raise ValueError("probes and values differ in length")

    def negation_index(self):
        """Index of ``-p`` for every probe ``p``; raises if the set is not closed."""
        keys = {(p + 0.0).tobytes(): i for i, p in enumerate(self.probes)}
        idx = np.empty(len(self.probes), dtype=np.int64)
        for i, p in enumerate(self.probes):
            j = keys.get((-p + 0.0).tobytes())
            if j is None:
                raise ValueError(f"probe set is not closed under negation (missing -{p.tolist()})")
            idx[i] = j
        return idx


def symmetric_probes(P):
    """``P`` together with ``-P``: a negation-closed probe set."""
    P = as_points(P)
    return np.vstack([P, -P])


def parity_parts(fmap):
    """Lazy odd and even parts ``(T, Q)`` of an evaluable map."""

    def odd(X):
        X = np.asarray(X, dtype=np.float64)
        return (fmap(X) - fmap(-X)) / 2.0

    def even(X):
        X = np.asarray(X, dtype=np.float64)
        return (fmap(X) + fmap(-X)) / 2.0

    return odd, even


def _quad_features(P):
    d = P.shape[1]
    iu = np.triu_indices(d)
    return P[:, iu[0]] * P[:, iu[1]], iu


def fit_linear(P, V):
    """Least-squares matrix ``L`` with ``V ~ P @ L.T``; returns ``(L, max residual)``."""
    coef, *_ = np.linalg.lstsq(P, V, rcond=None)
    return coef.T, float(np.max(np.abs(P @ coef - V), initial=0.0))


def fit_forms(P, V):
    """Least-squares symmetric forms ``B_k`` with ``V_k ~ p^T B_k p``."""
    F, (i, j) = _quad_features(P)
    coef, *_ = np.linalg.lstsq(F, V, rcond=None)
    d = P.shape[1]
    B = np.zeros((V.shape[1], d, d))
    for c, (a, b) in enumerate(zip(i, j)):
        w = coef[c] if a == b else coef[c] / 2.0
        B[:, a, b] = w
        B[:, b, a] = w
    return B, float(np.max(np.abs(F @ coef - V), initial=0.0))


def decompose_T_Q(A, rel=None, sampler=None, n_pairs=0, source=None):
    """Split sampled values into odd part ``T`` and even part ``Q``.

    ``T(x) = (A(x) - A(-x))/2`` and ``Q(x) = (A(x) + A(-x))/2`` on the probe
    set. Diagnostics hold least-squares linear and symmetric-form fits with
    their residuals; these are reports, not assertions, since additive maps
    need not be linear. When ``source`` (an evaluable version of ``A``), a
    relation and a sampler are given, the Jensen and orthogonal-additivity
    residuals of each part are measured on fresh orthogonal pairs.
    """
    idx = A.negation_index()
    Tv = (A.values - A.values[idx]) / 2.0
    Qv = (A.values + A.values[idx]) / 2.0
    T = SampledMap(A.probes, Tv, f"odd part of {A.provenance}".strip())
    Q = SampledMap(A.probes, Qv, f"even part of {A.provenance}".strip())
    L, lres = fit_linear(A.probes, Tv)
    B, qres = fit_forms(A.probes, Qv)
    diag = {
        "linear_fit": {"matrix": L.tolist(), "max_residual": lres},
        "form_fit": {"forms": B.tolist(), "max_residual": qres},
        "max_abs_T": float(np.max(np.abs(Tv), initial=0.0)),
        "max_abs_Q": float(np.max(np.abs(Qv), initial=0.0)),
    }
    if source is not None and rel is not None and sampler is not None and n_pairs > 0:
        t_map, q_map = parity_parts(source)
        pairs = sample_orthogonal_pairs(rel, sampler, n_pairs)
        diag["T_jensen"] = jensen_residual(t_map, rel, None, n_pairs, pairs).max
        diag["T_orth_additivity"] = orthogonal_additivity_residual(t_map, rel, None, n_pairs, pairs).max
        diag["Q_jensen"] = jensen_residual(q_map, rel, None, n_pairs, pairs).max
        diag["Q_orth_additivity"] = orthogonal_additivity_residual(q_map, rel, None, n_pairs, pairs).max
    return T, Q, diag
