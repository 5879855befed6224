"""Command-line front end: ``orthostab <subcommand> --config FILE``.

Exit codes: 0 pass, 1 checked-property failure, 2 config error,
3 numerical abort (divergence or search budget exhausted).
"""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click
import numpy as np

from . import config as cfgmod
from .config import ConfigError
from .hyers import hyers_traces
from .linalg import plane_basis
from .orthogonality import (
    SearchFailed,
    axiom_suite,
    bj_minimize,
    is_orthogonal,
    orthogonality_defect,
    random_planes_through,
    symmetry_probe,
    thales_residual,
    thales_solve,
)
from .reporting import checks_csv, csv_text, dumps, output_paths, trace_rows_csv, write_atomic
from .verifier import (
    SCHEMA,
    even_case_explore,
    degenerate_tie_check,
    theorem_probes,
    uniqueness_probe,
    verify_theorem,
    z2_remark_check,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
STATUS_EXIT = {
    "PASS": EXIT_OK,
    "EXPLORED": EXIT_OK,
    "FAIL": EXIT_FAIL,
    "ODD_VIOLATION": EXIT_FAIL,
    "EVEN_VIOLATION": EXIT_FAIL,
    "DIVERGED": EXIT_NUMERIC,
}


def _common(fn):
    @click.option("--config", "config_path", type=click.Path(dir_okay=False), help="JSON experiment config.")
    @click.option("--seed", type=int, default=None, help="Master seed (overrides config and ORTHOSTAB_SEED).")
    @click.option("--n-max", type=int, default=None, help="Hyers iteration budget.")
    @click.option("--out", type=click.Path(dir_okay=False), default=None, help="Report path (default stdout).")
    @click.option("--format", "fmt", type=click.Choice(["json", "csv", "both"]), default=None)
    @functools.wraps(fn)
    def wrapper(config_path, seed, n_max, out, fmt, **kw):
        try:
            cfg = cfgmod.load_config(config_path)
            seed = cfgmod.resolve_seed(cfg, seed)
            if n_max is not None and n_max < 1:
                raise ConfigError("--n-max must be >= 1")
            code = fn(cfg=cfg, seed=seed, n_max=n_max, out=out, fmt=fmt, **kw)
        except ConfigError as exc:
            click.echo(f"error: {exc}", err=True)
            code = EXIT_CONFIG
        except (ValueError, KeyError) as exc:
            click.echo(f"error: invalid input: {exc}", err=True)
            code = EXIT_CONFIG
        sys.exit(code)

    return wrapper


def _emit(cfg, out, fmt, payload, csv_body=None):
    """Write the report once, after all computation."""
    section = cfg.get("output", {})
    out = out or section.get("path")
    fmt = fmt or section.get("format", "json")
    texts = {"json": dumps(payload), "csv": csv_body}
    if fmt in ("csv", "both") and csv_body is None:
        raise ConfigError("this subcommand has no CSV form; use --format json")
    if out is None:
        if fmt == "both":
            raise ConfigError("--format both needs --out")
        click.echo(texts[fmt], nl=False)
        return
    for kind, path in output_paths(out, fmt).items():
        write_atomic(path, texts[kind])


def _input_dim(cfg, rel, given):
    """Dimension implied by explicit input vectors, checked against the config."""
    if cfg.get("dim", given) != given:
        raise ConfigError(f"input vectors have dimension {given}, config says {cfg['dim']}")
    return cfgmod.space_dim({"dim": given}, rel)


def _dim_points(pts, dim, name):
    arr = np.asarray(pts, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ConfigError(f"{name} must be a list of {dim}-vectors")
    return arr


@click.group()
def main():
    """Numerical laboratory for orthogonality spaces and Pexider stability."""


@main.command()
@_common
@click.option("--check", type=click.Choice(["axioms", "symmetry", "all"]), default=None,
              help="What to check: the O1-O4 axioms, symmetry of the relation, or both.")
def axioms(cfg, seed, n_max, out, fmt, check):
    """Check the orthogonality axioms (and optionally symmetry) on samples."""
    rel = cfgmod.build_relation(cfg)
    sampler = cfgmod.sampler_for(cfg, seed, rel)
    n = cfg.get("samples", {}).get("n_samples", 1000)
    check = check or cfg.get("check", "axioms")
    payload = {"schema": SCHEMA, "kind": "axioms", "check": check, "relation": rel.to_dict(),
               "dim": sampler.dim, "seed": seed, "n_samples": n}
    rows, ok = [], True
    if check in ("axioms", "all"):
        rep = axiom_suite(rel, sampler, n, tuple(cfg.get("axioms", ("O1", "O2", "O3", "O4"))))
        payload["axioms"] = rep.to_dict()["axioms"]
        ok &= rep.passed
        for name, r in rep.axioms.items():
            rows.append((name, r.checked, len(r.violations), r.max_residual, r.tolerance, r.search_failures))
    if check in ("symmetry", "all"):
        witness = symmetry_probe(rel, sampler.spawn(5), cfg.get("samples", {}).get("symmetry_samples", n))
        payload["symmetry"] = {
            "symmetric_on_samples": witness is None,
            "witness": None if witness is None else [w.tolist() for w in witness],
        }
        ok &= witness is None
        rows.append(("symmetry", n, 0 if witness is None else 1, 0.0, rel.tolerance, 0))
    payload["passed"] = bool(ok)
    body = csv_text(["axiom", "checked", "violations", "max_residual", "tolerance", "search_failures"], rows)
    _emit(cfg, out, fmt, payload, body)
    return EXIT_OK if ok else EXIT_FAIL


@main.group()
def orth():
    """Pairwise orthogonality queries."""


@orth.command("check")
@_common
def orth_check(cfg, seed, n_max, out, fmt):
    """Decide orthogonality for the pairs listed in the config."""
    rel = cfgmod.build_relation(cfg)
    if "pairs" not in cfg:
        raise ConfigError("config needs a 'pairs' list of [x, y] entries")
    dim = _input_dim(cfg, rel, len(cfg["pairs"][0][0]))
    X = _dim_points([p[0] for p in cfg["pairs"]], dim, "pairs")
    Y = _dim_points([p[1] for p in cfg["pairs"]], dim, "pairs")
    defects = np.atleast_1d(orthogonality_defect(rel, X, Y))
    results, rows = [], []
    for i, (x, y, d) in enumerate(zip(X, Y, defects)):
        verdict = bool(is_orthogonal(rel, x, y))
        entry = {"x": x.tolist(), "y": y.tolist(), "orthogonal": verdict, "defect": float(d)}
        if rel.kind == "birkhoff_james" and np.any(y):
            lam, val = bj_minimize(rel.norm, x, y)
            entry.update({"lambda_star": lam, "min_value": val})
        results.append(entry)
        rows.append((i, str(verdict).lower(), float(d)))
    ok = all(r["orthogonal"] for r in results)
    payload = {"schema": SCHEMA, "kind": "orth_check", "relation": rel.to_dict(), "pairs": results,
               "all_orthogonal": ok}
    _emit(cfg, out, fmt, payload, csv_text(["pair", "orthogonal", "defect"], rows))
    return EXIT_OK if ok else EXIT_FAIL


@main.command()
@_common
def thales(cfg, seed, n_max, out, fmt):
    """Solve the Thalesian condition for the x and lambda in the config."""
    rel = cfgmod.build_relation(cfg)
    spec = cfg.get("thales")
    if spec is None:
        raise ConfigError("config needs a 'thales' section with x and lambda")
    x = np.asarray(spec["x"], dtype=np.float64)
    dim = _input_dim(cfg, rel, len(x))
    if "plane" in spec:
        plane = _dim_points(spec["plane"], dim, "thales.plane")
    else:
        plane = random_planes_through(x[None], cfgmod.PairSampler(seed, dim))[0]
    lam = float(spec["lambda"])
    payload = {"schema": SCHEMA, "kind": "thales", "relation": rel.to_dict(), "x": x.tolist(),
               "lambda": lam, "plane": np.asarray(plane).tolist()}
    try:
        plane_basis(x, plane)
        y0 = thales_solve(rel, x, lam, plane)
    except SearchFailed as exc:
        payload.update({"status": "SEARCH_FAILED", "message": str(exc)})
        _emit(cfg, out, fmt, payload, csv_text(["status"], [("SEARCH_FAILED",)]))
        return EXIT_NUMERIC
    res = thales_residual(rel, x, y0, lam)
    payload.update({"status": "SOLVED", "y0": y0.tolist(), "residual": res})
    header = [f"x_{i}" for i in range(dim)] + ["lambda"] + [f"y0_{i}" for i in range(dim)] + ["residual"]
    _emit(cfg, out, fmt, payload, csv_text(header, [(*x.tolist(), lam, *y0.tolist(), res)]))
    return EXIT_OK


@main.command()
@_common
def hyers(cfg, seed, n_max, out, fmt):
    """Run Hyers iterations of a map at the configured points."""
    rel = cfgmod.build_relation(cfg)
    triple = None
    if "map" in cfg:
        f = cfgmod.build_model(cfg["map"])
    else:
        triple = cfgmod.build_triple(cfg, rel)
        f = triple.f
    if "points" in cfg:
        P = _dim_points(cfg["points"], f.dim, "points")
    else:
        P = cfgmod.PairSampler(seed, f.dim).spawn(11).vectors(cfg.get("samples", {}).get("n_probes", 10))
    eps = None if triple is None else triple.epsilon_design
    traces = hyers_traces(f, P, n_max or cfg.get("n_max", 40), cfg.get("stop_tol", 1e-12),
                          cfg.get("scaling", "additive"), eps)
    payload = {"schema": SCHEMA, "kind": "hyers", "traces": [t.to_dict() for t in traces]}
    _emit(cfg, out, fmt, payload, trace_rows_csv(traces))
    return EXIT_NUMERIC if any(t.verdict == "diverged" for t in traces) else EXIT_OK


@main.command()
@_common
@click.option("--emit-trace", is_flag=True, help="Also write one Hyers trace CSV per probe.")
@click.option("--trace-dir", type=click.Path(file_okay=False), default=None)
@click.option("--bound-scale", type=float, default=None, help="Multiply every bound (harness self-test).")
def verify(cfg, seed, n_max, out, fmt, emit_trace, trace_dir, bound_scale):
    """Measure every inequality of the stability theorem."""
    rel = cfgmod.build_relation(cfg)
    triple = cfgmod.build_triple(cfg, rel)
    cfgmod.space_dim(cfg, rel, triple)
    tc = cfgmod.theorem_config(cfg, seed, n_max, bound_scale)
    report = verify_theorem(triple, tc).to_dict()
    if emit_trace:
        tdir = Path(trace_dir or cfg.get("output", {}).get("trace_dir")
                    or (Path(out).with_suffix("").as_posix() + "_traces" if out else "traces"))
        probes = theorem_probes(triple, tc)
        for i, t in enumerate(hyers_traces(triple.f, probes, tc.n_max, tc.stop_tol)):
            write_atomic(tdir / f"trace_{i:04d}.csv", t.to_csv())
    _emit(cfg, out, fmt, report, checks_csv(report))
    return STATUS_EXIT[report["status"]]


@main.command()
@_common
def uniqueness(cfg, seed, n_max, out, fmt):
    """Compare two independent reconstructions of T and Q."""
    rel = cfgmod.build_relation(cfg)
    triple = cfgmod.build_triple(cfg, rel)
    tc = cfgmod.theorem_config(cfg, seed, n_max)
    spec = cfg.get("uniqueness", {})
    report = uniqueness_probe(triple, tc, spec.get("alt_seed", seed + 1),
                              spec.get("n_scaling_probes", 10)).to_dict()
    _emit(cfg, out, fmt, report, checks_csv(report))
    return STATUS_EXIT[report["status"]]


@main.command()
@_common
@click.option("--mode", type=click.Choice(["g_eq_lambda_f", "h_eq_lambda_f"]), default=None)
@click.option("--lambda", "lam", type=float, default=None)
@click.option("--epsilon", type=float, default=None)
def degenerate(cfg, seed, n_max, out, fmt, mode, lam, epsilon):
    """Degenerate ties g = lambda f or h = lambda f: the limit must vanish."""
    spec = dict(cfg.get("degenerate", {}))
    for key, val in (("mode", mode), ("lambda", lam), ("epsilon", epsilon)):
        if val is not None:
            spec[key] = val
    missing = [k for k in ("mode", "lambda", "epsilon") if k not in spec]
    if missing:
        raise ConfigError(f"degenerate run needs {', '.join(missing)}")
    if spec["epsilon"] < 0:
        raise ConfigError("epsilon must be nonnegative")
    tc = cfgmod.theorem_config(cfg, seed, n_max)
    report = degenerate_tie_check(spec["mode"], spec["lambda"], spec["epsilon"], tc,
                                  seed=spec.get("noise_seed", 0), dim=cfg.get("dim", 2)).to_dict()
    _emit(cfg, out, fmt, report, checks_csv(report))
    return STATUS_EXIT[report["status"]]


@main.command()
@_common
@click.option("--grid-radius", type=int, default=None)
def counterexample(cfg, seed, n_max, out, fmt, grid_radius):
    """Exhaustive Z_2 check: A = 1 satisfies the Jensen identity with A(0) != 0."""
    radius = grid_radius if grid_radius is not None else cfg.get("counterexample", {}).get("grid_radius", 5)
    if radius < 1:
        raise ConfigError("grid_radius must be >= 1")
    cert = z2_remark_check(radius).to_dict()
    body = csv_text(["key", "value"], [(k, v) for k, v in cert.items()])
    _emit(cfg, out, fmt, cert, body)
    return EXIT_OK if cert["holds"] else EXIT_FAIL


@main.command("explore-even")
@_common
def explore_even(cfg, seed, n_max, out, fmt):
    """Exploratory quadratic-scaling run for an even f (no bound asserted)."""
    rel = cfgmod.build_relation(cfg)
    triple = cfgmod.build_triple(cfg, rel)
    report = even_case_explore(triple, cfgmod.theorem_config(cfg, seed, n_max)).to_dict()
    rows = [(k, v) for k, v in sorted(report["diagnostics"].items()) if not isinstance(v, (dict, list))]
    _emit(cfg, out, fmt, report, csv_text(["key", "value"], rows))
    return STATUS_EXIT[report["status"]]


if __name__ == "__main__":
    main()
