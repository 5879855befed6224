"""End-to-end numerical verification of the orthogonal Pexider stability theorem.

Every inequality of the proof chain is measured on sampled points and
compared against its constant: eps/2 for ``h`` and for ``f - g``, 3 eps for
the Jensen-type premise, 6 eps for the doubling step, the Hyers limit and
``f - T - Q``, 13/2 eps for ``g - T - Q``, and 12 eps for two competing
limits. A check passes when ``measured <= bound + 1e-9 (1 + bound)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .hyers import (
    DivergenceError,
    HyersLimit,
    SampledMap,
    decompose_T_Q,
    hyers_iterates,
    jensen_residual,
    parity_parts,
    sup_norm,
    symmetric_probes,
)
from .models import FiniteModel, MapModel, NoiseSpec, PexiderTriple
from .orthogonality import (
    OrthoRelation,
    PairSampler,
    SearchFailed,
    random_planes_through,
    sample_orthogonal_pairs,
    symmetry_probe,
    thales_solve,
)

SCHEMA = "orthostab-report-v1"

# constants of the proof chain, as multiples of epsilon
CONSTANTS = {
    "h_bound": 0.5,
    "f_minus_g": 0.5,
    "jensen_premise": 3.0,
    "doubling": 6.0,
    "hyers_limit": 6.0,
    "f_minus_TQ": 6.0,
    "g_minus_TQ": 6.5,
    "uniqueness_A": 12.0,
}


def slack(bound):
    return 1e-9 * (1.0 + abs(bound))


@dataclass
class Check:
    name: str
    formula: str
    measured: float
    bound: float
    witness: list | None = None

    @property
    def margin(self):
        return self.bound - self.measured

    @property
    def passed(self):
        return bool(self.measured <= self.bound + slack(self.bound))

    def to_dict(self):
        return {
            "name": self.name,
            "formula": self.formula,
            "measured": self.measured,
            "bound": self.bound,
            "margin": self.margin,
            "pass": self.passed,
            "witness": self.witness,
        }


@dataclass
class TheoremCheckConfig:
    n_pairs: int = 10_000
    n_probes: int = 1_000
    n_max: int = 40
    stop_tol: float = 1e-12
    epsilon_source: str = "sampled"
    seed: int = 0
    n_series_probes: int = 100
    symmetry_samples: int = 1_000
    bound_scale: float = 1.0

    def __post_init__(self):
        for name in ("n_pairs", "n_probes", "n_max", "n_series_probes", "symmetry_samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.epsilon_source not in ("design", "sampled"):
            raise ValueError("epsilon_source must be 'design' or 'sampled'")
        if not self.bound_scale > 0:
            raise ValueError("bound_scale must be positive")

    def to_dict(self):
        return asdict(self)


@dataclass
class StabilityReport:
    epsilon_design: float
    epsilon_sampled: float
    epsilon_used: float
    checks: list = field(default_factory=list)
    status: str = "PASS"
    diagnostics: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    kind: str = "theorem"

    @property
    def passed(self):
        return self.status == "PASS"

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def finalize(self):
        if self.status == "PASS" and not all(c.passed for c in self.checks):
            self.status = "FAIL"
        return self

    def to_dict(self):
        return {
            "schema": SCHEMA,
            "kind": self.kind,
            "status": self.status,
            "epsilon_design": self.epsilon_design,
            "epsilon_sampled": self.epsilon_sampled,
            "epsilon_used": self.epsilon_used,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "diagnostics": _plain(self.diagnostics),
            "config": _plain(self.config),
        }


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _argmax_witness(values, *arrays):
    k = int(np.argmax(values))
    return [a[k].tolist() for a in arrays]


def premise_sup(triple, sampler, n_pairs, pairs=None):
    """Sup of the premise residual over sampled orthogonal pairs: ``(eps_hat, (x, y))``."""
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    X, Y = pairs if pairs is not None else sample_orthogonal_pairs(triple.relation, sampler, n_pairs)
    r = triple.premise_residual(X, Y)
    k = int(np.argmax(r))
    return float(r[k]), (X[k], Y[k])


def _probe_set(sampler, n_probes):
    return symmetric_probes(sampler.vectors(max(1, (n_probes + 1) // 2)))


def theorem_probes(triple, cfg):
    """The negation-closed probe set :func:`verify_theorem` uses for ``cfg``."""
    return _probe_set(PairSampler(cfg.seed, triple.dim).spawn(11), cfg.n_probes)


def verify_theorem(triple, cfg=None):
    """Measure every step of the stability proof for ``triple``.

    Returns a :class:`StabilityReport`; its ``status`` is ``PASS``, ``FAIL``,
    ``ODD_VIOLATION`` (``f`` is not odd) or ``DIVERGED``.
    """
    cfg = cfg or TheoremCheckConfig()
    rel = triple.relation
    master = PairSampler(cfg.seed, triple.dim)
    f, g, h = triple.f, triple.g, triple.h

    probes = _probe_set(master.spawn(11), cfg.n_probes)
    half = len(probes) // 2
    base = probes[:half]
    odd_defect = float(np.max(sup_norm(f(probes) + f(-probes))))
    report = StabilityReport(triple.epsilon_design, math.nan, math.nan, config=cfg.to_dict())
    report.diagnostics["odd_defect"] = odd_defect
    if odd_defect > 1e-9:
        report.status = "ODD_VIOLATION"
        report.diagnostics["message"] = (
            f"ODD_VIOLATION: max |f(x) + f(-x)| = {odd_defect:.3e} exceeds 1e-9; "
            "the theorem assumes an odd f"
        )
        return report

    witness = symmetry_probe(rel, master.spawn(15), cfg.symmetry_samples)
    report.diagnostics["symmetry_witness"] = None if witness is None else [w.tolist() for w in witness]
    report.diagnostics["relation_symmetric_on_samples"] = witness is None

    pairs = sample_orthogonal_pairs(rel, master.spawn(10), cfg.n_pairs)
    eps_hat, arg = premise_sup(triple, None, cfg.n_pairs, pairs)
    report.epsilon_sampled = eps_hat
    eps = eps_hat if cfg.epsilon_source == "sampled" else triple.epsilon_design
    report.epsilon_used = eps
    report.diagnostics["premise_argmax"] = [a.tolist() for a in arg]
    if eps_hat > triple.epsilon_design + slack(triple.epsilon_design):
        report.diagnostics["premise_warning"] = "sampled premise sup exceeds the design epsilon"

    def bound(name):
        return CONSTANTS[name] * eps * cfg.bound_scale

    fP, gP = f(probes), g(probes)
    r = sup_norm(h(probes))
    report.checks.append(Check("h_bound", "|h(y)| <= eps/2", float(r.max()), bound("h_bound"),
                               _argmax_witness(r, probes)))
    r = sup_norm(fP - gP)
    report.checks.append(Check("f_minus_g", "|f(x) - g(x)| <= eps/2", float(r.max()), bound("f_minus_g"),
                               _argmax_witness(r, probes)))

    jp = jensen_residual(f, rel, None, cfg.n_pairs, sample_orthogonal_pairs(rel, master.spawn(13), cfg.n_pairs))
    report.checks.append(Check("jensen_premise", "|f(x+y) + f(x-y) - 2f(x)| <= 3 eps", jp.max,
                               bound("jensen_premise"), [a.tolist() for a in jp.argmax]))

    # doubling step, re-enacted with the Thales point y0 of (x, lambda = 1)
    s12 = master.spawn(12)
    planes = random_planes_through(base, s12)
    dbl, sub, skipped, wit = [], [], 0, None
    for x, plane in zip(base, planes):
        try:
            y0 = thales_solve(rel, x, 1.0, plane)
        except SearchFailed:
            skipped += 1
            continue
        pts = np.vstack([x + y0, x - y0, x, 2 * x, 2 * y0])
        fx_p, fx_m, fx, f2x, f2y = f(pts)
        sub.append(max(
            np.max(np.abs(fx_p + fx_m - 2 * fx)),
            np.max(np.abs(f2x + f2y - 2 * fx_p)),
            np.max(np.abs(f2x - f2y - 2 * fx_m)),
        ))
        val = float(np.max(np.abs(f2x - 2 * fx)))
        if not dbl or val > max(dbl):
            wit = [x.tolist(), y0.tolist()]
        dbl.append(val)
    report.diagnostics["thales_skipped"] = skipped
    report.diagnostics["thales_jensen_max"] = float(max(sub)) if sub else None
    report.checks.append(Check("doubling", "|f(2x) - 2f(x)| <= 6 eps", float(max(dbl)) if dbl else 0.0,
                               bound("doubling"), wit))

    # Hyers limit at the probes
    values, valid = hyers_iterates(f, probes, cfg.n_max, "additive")
    A = HyersLimit(f, cfg.n_max, cfg.stop_tol)
    traces = A.traces(probes, epsilon=eps)
    diverged = [t for t in traces if t.verdict == "diverged"]
    verdicts = {}
    for t in traces:
        verdicts[t.verdict] = verdicts.get(t.verdict, 0) + 1
    report.diagnostics["hyers_verdicts"] = verdicts
    if diverged:
        report.status = "DIVERGED"
        report.diagnostics["message"] = f"Hyers sequence diverged at x = {diverged[0].x.tolist()}"
        return report.finalize()
    AP = np.vstack([t.limit for t in traces])
    stop_ns = np.array([t.stop_n for t in traces])
    report.diagnostics["min_stop_n"] = int(stop_ns.min())
    r = sup_norm(fP - AP)
    report.checks.append(Check("hyers_limit", "|f(x) - A(x)| <= 6 eps", float(r.max()), bound("hyers_limit"),
                               _argmax_witness(r, probes)))

    # geometric series and Cauchy bounds along all stored iterates
    geo, cau = -np.inf, -np.inf
    for j in range(min(cfg.n_series_probes, len(probes))):
        vals = values[valid[:, j], j]
        ns = np.arange(len(vals))
        geo = max(geo, float(np.max(sup_norm(vals - fP[j]) - 6 * eps * (1 - 0.5**ns))))
        m_idx, n_idx = np.triu_indices(len(vals), 1)
        D = sup_norm(vals[n_idx] - vals[m_idx])
        cau = max(cau, float(np.max(D - 6 * eps * (0.5**m_idx - 0.5**n_idx), initial=-np.inf)))
    report.checks.append(Check("geometric_series", "max_n |2^-n f(2^n x) - f(x)| - 6 eps (1 - 2^-n) <= 0",
                               max(geo, 0.0), 0.0))
    report.checks.append(Check("cauchy", "max_m<n |a_n - a_m| - 6 eps (2^-m - 2^-n) <= 0",
                               max(cau, 0.0), 0.0))
    report.diagnostics["geometric_series_max_excess"] = geo
    report.diagnostics["cauchy_max_excess"] = cau

    # the limit satisfies the Jensen-type identity on fresh pairs
    lp = sample_orthogonal_pairs(rel, master.spawn(14), cfg.n_pairs)
    A.min_stop_n = None
    try:
        lj = jensen_residual(A, rel, None, cfg.n_pairs, lp)
    except DivergenceError as exc:
        report.status = "DIVERGED"
        report.diagnostics["message"] = str(exc)
        return report.finalize()
    tail = 6.0 * eps * 2.0 ** -A.min_stop_n
    report.checks.append(Check("limit_jensen", "|A(x+y) + A(x-y) - 2A(x)| <= 2 * 6 eps 2^-n",
                               lj.max, 2.0 * tail * cfg.bound_scale, [a.tolist() for a in lj.argmax]))
    report.diagnostics["tail_bound"] = tail
    probe_tail = 6.0 * eps * 2.0 ** -int(stop_ns.min())
    r = sup_norm(AP[:half] + AP[half:])
    report.checks.append(Check("limit_odd", "|A(x) + A(-x)| <= 2 * 6 eps 2^-n", float(r.max()),
                               2.0 * probe_tail * cfg.bound_scale, _argmax_witness(r, base)))
    report.checks.append(Check("limit_at_zero", "|A(0)| <= 6 eps 2^-n",
                               float(sup_norm(A(np.zeros(triple.dim)))), tail * cfg.bound_scale))

    # parity split A = T + Q and the final bounds
    Ts, Qs, diag = decompose_T_Q(SampledMap(probes, AP, "Hyers limit of f"))
    report.diagnostics["decomposition"] = diag
    TQ = Ts.values + Qs.values
    r = sup_norm(fP - TQ)
    report.checks.append(Check("f_minus_TQ", "|f(x) - T(x) - Q(x)| <= 6 eps", float(r.max()),
                               bound("f_minus_TQ"), _argmax_witness(r, probes)))
    r = sup_norm(gP - TQ)
    report.checks.append(Check("g_minus_TQ", "|g(x) - T(x) - Q(x)| <= 13/2 eps", float(r.max()),
                               bound("g_minus_TQ"), _argmax_witness(r, probes)))
    return report.finalize()


def uniqueness_probe(triple, cfg=None, alt_seed=1, n_scaling_probes=10):
    """Compare two independent reconstructions ``(T, Q)`` and ``(T', Q')``.

    The second run uses ``n_max - 5`` iterations and probes drawn from
    ``alt_seed``. Both decompositions are compared on the union of the two
    probe sets. The scaling table ``|T(nx) - T'(nx)| / n`` for
    ``n in {1, 2, 4, 8}`` is reported per probe; its sup over the probes
    must be nonincreasing in ``n``.
    """
    cfg = cfg or TheoremCheckConfig()
    rel = triple.relation
    n1, n2 = cfg.n_max, cfg.n_max - 5
    if n2 < 1:
        raise ValueError("n_max must exceed 5 for the uniqueness probe")
    master = PairSampler(cfg.seed, triple.dim)
    pairs = sample_orthogonal_pairs(rel, master.spawn(10), cfg.n_pairs)
    eps_hat, _ = premise_sup(triple, None, cfg.n_pairs, pairs)
    eps = eps_hat if cfg.epsilon_source == "sampled" else triple.epsilon_design
    report = StabilityReport(triple.epsilon_design, eps_hat, eps, kind="uniqueness", config=cfg.to_dict())
    report.config["alt_seed"] = alt_seed
    report.config["n_max_alt"] = n2

    P1 = _probe_set(master.spawn(11), cfg.n_probes)
    P2 = _probe_set(PairSampler(alt_seed, triple.dim).spawn(11), cfg.n_probes)
    A1 = HyersLimit(triple.f, n1, cfg.stop_tol)
    A2 = HyersLimit(triple.f, n2, cfg.stop_tol)
    try:
        # each run decomposes on its own probe schedule
        T1, Q1, d1 = decompose_T_Q(SampledMap(P1, A1(P1), "run 1"))
        T2, Q2, d2 = decompose_T_Q(SampledMap(P2, A2(P2), "run 2"))
        t1, q1 = parity_parts(A1)
        t2, q2 = parity_parts(A2)
        P = np.vstack([P1, P2])
        dA = sup_norm(A1(P) - A2(P))
        dT = sup_norm(t1(P) - t2(P))
        dQ = sup_norm(q1(P) - q2(P))
        S = master.spawn(16).vectors(n_scaling_probes)
        scales = (1, 2, 4, 8)
        table = np.column_stack([sup_norm(t1(n * S) - t2(n * S)) / n for n in scales])
    except DivergenceError as exc:
        report.status = "DIVERGED"
        report.diagnostics["message"] = str(exc)
        return report
    stop1, stop2 = A1.min_stop_n, A2.min_stop_n
    tails = 6.0 * eps * (2.0**-stop1 + 2.0**-stop2)
    report.checks.append(Check("uniqueness_T", "|T - T'| <= 6 eps (2^-n + 2^-n')", float(dT.max()),
                               tails * cfg.bound_scale, _argmax_witness(dT, P)))
    report.checks.append(Check("uniqueness_Q", "|Q - Q'| <= 6 eps (2^-n + 2^-n')", float(dQ.max()),
                               tails * cfg.bound_scale, _argmax_witness(dQ, P)))
    report.checks.append(Check("uniqueness_A", "|A - A'| <= 12 eps", float(dA.max()),
                               CONSTANTS["uniqueness_A"] * eps * cfg.bound_scale, _argmax_witness(dA, P)))
    col_sup = table.max(axis=0)
    increase = float(np.max(np.diff(col_sup), initial=0.0))
    report.checks.append(Check("scaling_nonincreasing",
                               "max_x |T(nx) - T'(nx)|/n nonincreasing over n = 1, 2, 4, 8",
                               max(increase, 0.0), 0.0))
    per_probe = np.all(np.diff(table, axis=1) <= 0, axis=1)
    bounds = tails / np.array(scales, dtype=float)
    report.checks.append(Check("scaling_bound", "|T(nx) - T'(nx)|/n <= 6 eps (2^-n + 2^-n') / n",
                               float(np.max(table / bounds[None, :])) if tails > 0 else float(table.max()),
                               1.0 if tails > 0 else 0.0))
    report.diagnostics.update({
        "stop_n": [stop1, stop2],
        "scaling_table": table,
        "scaling_column_sup": col_sup,
        "scaling_monotone_per_probe_fraction": float(per_probe.mean()),
        "scaling_n8_le_n1_all_probes": bool(np.all(table[:, 3] <= table[:, 0])),
        "T_fit_discrepancy": float(np.max(np.abs(np.asarray(d1["linear_fit"]["matrix"])
                                                  - np.asarray(d2["linear_fit"]["matrix"])))),
        "decomposition_max_abs_Q": [float(np.abs(Q1.values).max()), float(np.abs(Q2.values).max())],
        "decomposition_max_abs_T": [float(np.abs(T1.values).max()), float(np.abs(T2.values).max())],
    })
    return report.finalize()


# -- degenerate ties and the Z_2 table ----------------------------------------


def degenerate_tie_check(mode, lam, eps, cfg=None, seed=0, dim=2):
    """Degenerate ties ``g = lam f`` (mode ``"g"``) or ``h = lam f`` (mode ``"h"``).

    ``f`` is odd bounded noise of the largest amplitude the tie allows:
    ``eps / (2|1 - lam|)`` for ``g = lam f`` and ``eps / (2|lam|)`` for
    ``h = lam f``. The Hyers limit must then vanish: ``|A(x)|`` stays below
    ``2^-n eps max(1/|1-lam|, 1)`` (resp. ``max(1/|lam|, 1)``).
    """
    cfg = cfg or TheoremCheckConfig()
    if mode in ("g_eq_lambda_f", "g", "i"):
        mode = "g_eq_lambda_f"
        if lam == 1:
            raise ValueError("g = lambda f needs lambda != 1")
        amp = eps / (2.0 * abs(1.0 - lam))
        factor = max(1.0 / abs(1.0 - lam), 1.0)
    elif mode in ("h_eq_lambda_f", "h", "ii"):
        mode = "h_eq_lambda_f"
        if lam == 0:
            raise ValueError("h = lambda f needs lambda != 0")
        amp = eps / (2.0 * abs(lam))
        factor = max(1.0 / abs(lam), 1.0)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if not eps >= 0:
        raise ValueError("eps must be nonnegative")
    f = MapModel(dim, 1, noise=NoiseSpec(amp, seed, "odd"), parity="odd")
    tied = _Scaled(f, lam)
    zero = MapModel(dim, 1)
    rel = OrthoRelation.inner_product()
    if mode == "g_eq_lambda_f":
        triple = PexiderTriple(f, tied, zero, eps, rel)
    else:
        triple = PexiderTriple(f, f, tied, eps, rel)
    master = PairSampler(cfg.seed, dim)
    pairs = sample_orthogonal_pairs(rel, master.spawn(10), cfg.n_pairs)
    eps_hat, _ = premise_sup(triple, None, cfg.n_pairs, pairs)
    probes = _probe_set(master.spawn(11), cfg.n_probes)
    A = HyersLimit(f, cfg.n_max, cfg.stop_tol)
    AP = A(probes)
    n_stop = A.min_stop_n
    report = StabilityReport(eps, eps_hat, eps, kind="degenerate", config=cfg.to_dict())
    report.config.update({"mode": mode, "lambda": lam, "epsilon": eps, "seed": seed})
    report.diagnostics.update({
        "f_amplitude": amp,
        "f_sup_on_probes": float(np.max(np.abs(f(probes)))),
        "stop_n": n_stop,
    })
    r = sup_norm(AP)
    report.checks.append(Check("limit_vanishes", "|A(x)| <= 2^-n eps max(1/|c|, 1)", float(r.max()),
                               2.0**-n_stop * eps * factor * cfg.bound_scale, _argmax_witness(r, probes)))
    return report.finalize()


class _Scaled:
    """``x -> lam * f(x)`` keeping the model interface used by triples."""

    def __init__(self, f, lam):
        self.f, self.lam = f, float(lam)
        self.dim, self.out_dim = f.dim, f.out_dim

    def __call__(self, X):
        return self.lam * self.f(X)

    def to_dict(self):
        return {"scaled": self.lam, "model": self.f.to_dict()}


@dataclass
class Z2Certificate:
    holds: bool
    grid_radius: int
    n_points: int
    n_pairs: int
    n_failures: int
    a_at_zero: int

    def to_dict(self):
        return {"schema": SCHEMA, "kind": "z2_counterexample", **asdict(self)}


def z2_remark_check(grid_radius):
    """Exhaustive check of ``A(x+y) + A(x-y) = 2A(x)`` in ``Z_2`` for ``A = 1``.

    Every ordered pair of the integer grid ``{-r..r}^2`` is tested, so the
    identity holds for any orthogonality restricted to the grid. Also
    records ``A(0) = 1 != 0``.
    """
    if grid_radius < 1:
        raise ValueError("grid_radius must be >= 1")
    model = FiniteModel.constant(2 * grid_radius, 1)
    pts = FiniteModel.constant(grid_radius).points()
    X = np.repeat(pts, len(pts), axis=0)
    Y = np.tile(pts, (len(pts), 1))
    lhs = (model(X + Y) + model(X - Y)) % 2
    rhs = (2 * model(X)) % 2
    fails = int(np.count_nonzero(lhs != rhs))
    a0 = int(model(np.zeros(2, dtype=np.int64)))
    return Z2Certificate(fails == 0 and a0 != 0, grid_radius, len(pts), len(X), fails, a0)


def even_case_explore(triple, cfg=None):
    """Exploratory run for an even ``f``: no bound is asserted.

    The candidate ``Q`` is the limit of ``4^-n f(2^n x)``. Reported are the
    ratios ``sup|f - Q|/eps``, ``sup|g - Q|/eps``, ``sup|h - Q|/eps`` and the
    orthogonal quadratic residual of ``Q``.
    """
    cfg = cfg or TheoremCheckConfig()
    rel = triple.relation
    master = PairSampler(cfg.seed, triple.dim)
    probes = _probe_set(master.spawn(11), cfg.n_probes)
    f, g, h = triple.f, triple.g, triple.h
    report = StabilityReport(triple.epsilon_design, math.nan, math.nan, kind="even_explore", config=cfg.to_dict())
    even_defect = float(np.max(sup_norm(f(probes) - f(-probes))))
    report.diagnostics["even_defect"] = even_defect
    if even_defect > 1e-9:
        report.status = "EVEN_VIOLATION"
        report.diagnostics["message"] = (
            f"EVEN_VIOLATION: max |f(x) - f(-x)| = {even_defect:.3e} exceeds 1e-9"
        )
        return report
    pairs = sample_orthogonal_pairs(rel, master.spawn(10), cfg.n_pairs)
    eps_hat, _ = premise_sup(triple, None, cfg.n_pairs, pairs)
    eps = eps_hat if cfg.epsilon_source == "sampled" else triple.epsilon_design
    report.epsilon_sampled, report.epsilon_used = eps_hat, eps
    Q = HyersLimit(f, cfg.n_max, cfg.stop_tol, scaling="quadratic")
    try:
        QP = Q(probes)
        X, Y = sample_orthogonal_pairs(rel, master.spawn(14), cfg.n_pairs)
        oq = sup_norm(Q(X + Y) + Q(X - Y) - 2 * Q(X) - 2 * Q(Y))
    except DivergenceError as exc:
        report.status = "DIVERGED"
        report.diagnostics["message"] = str(exc)
        return report

    def ratio(v):
        top = float(np.max(v))
        if eps > 0:
            return top / eps
        return 0.0 if top == 0 else math.inf

    report.diagnostics.update({
        "alpha_hat": ratio(sup_norm(f(probes) - QP)),
        "beta_hat": ratio(sup_norm(g(probes) - QP)),
        "gamma_hat": ratio(sup_norm(h(probes) - QP)),
        "sup_f_minus_Q": float(np.max(sup_norm(f(probes) - QP))),
        "orth_quadratic_residual_Q": float(np.max(oq)),
        "stop_n": Q.min_stop_n,
    })
    report.status = "EXPLORED"
    return report
