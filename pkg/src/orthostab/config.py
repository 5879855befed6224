"""Experiment configuration: schema validation and object construction."""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .models import MapModel, PexiderTriple, make_pexider_instance
from .orthogonality import OrthoRelation, PairSampler
from .verifier import TheoremCheckConfig

SEED_ENV = "ORTHOSTAB_SEED"


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps it to exit code 2."""


def load_schema():
    text = resources.files("orthostab").joinpath("schemas/config.schema.json").read_text()
    return json.loads(text)


def validate(cfg):
    try:
        jsonschema.validate(cfg, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None
    return cfg


def load_config(path):
    """Read and validate a JSON config; ``None`` gives an empty config."""
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    validate(cfg)
    cfg["_base_dir"] = str(Path(path).resolve().parent)
    return cfg


def resolve_seed(cfg, flag=None):
    """``--seed`` beats the config, which beats ``ORTHOSTAB_SEED``; default 0."""
    if flag is not None:
        seed = flag
    elif "seed" in cfg:
        seed = cfg["seed"]
    elif os.environ.get(SEED_ENV, "").strip():
        raw = os.environ[SEED_ENV].strip()
        try:
            seed = int(raw)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={raw!r} is not an integer") from None
    else:
        seed = 0
    if not 0 <= seed < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer")
    return int(seed)


def build_relation(cfg):
    spec = cfg.get("relation", {"kind": "inner_product"})
    try:
        return OrthoRelation.from_dict(spec)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad relation: {exc}") from None


def space_dim(cfg, rel=None, triple=None):
    dims = set()
    if "dim" in cfg:
        dims.add(cfg["dim"])
    if rel is not None and rel.dim is not None:
        dims.add(rel.dim)
    if triple is not None:
        dims.add(triple.dim)
    if len(dims) > 1:
        raise ConfigError(f"inconsistent dimensions in config: {sorted(dims)}")
    return dims.pop() if dims else 2


def sampler_for(cfg, seed, rel=None, triple=None):
    return PairSampler(seed, space_dim(cfg, rel, triple))


def build_model(spec):
    try:
        return MapModel.from_dict(spec)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad map model: {exc}") from None


def build_triple(cfg, rel):
    spec = cfg.get("triple")
    if spec is None and "triple_file" in cfg:
        path = Path(cfg.get("_base_dir", ".")) / cfg["triple_file"]
        sub = load_config(path)
        if "triple" not in sub:
            raise ConfigError(f"{path} holds no 'triple' section")
        spec = sub["triple"]
    if spec is None:
        raise ConfigError("config needs a 'triple' (or 'triple_file') section")
    try:
        if "instance" in spec:
            inst = spec["instance"]
            return make_pexider_instance(
                np.asarray(inst["linear"], dtype=np.float64),
                inst.get("eps_f", 0.0),
                inst.get("eps_g", 0.0),
                inst.get("eps_h", 0.0),
                inst.get("seeds", (1, 2, 3)),
                rel,
            )
        return PexiderTriple(
            build_model(spec["f"]),
            build_model(spec["g"]),
            build_model(spec["h"]),
            float(spec["epsilon_design"]),
            rel,
        )
    except ConfigError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad triple: {exc}") from None


def theorem_config(cfg, seed, n_max=None, bound_scale=None):
    samples = cfg.get("samples", {})
    kw = {
        "seed": seed,
        "n_max": n_max if n_max is not None else cfg.get("n_max", 40),
        "stop_tol": cfg.get("stop_tol", 1e-12),
        "epsilon_source": cfg.get("epsilon_source", "sampled"),
        "bound_scale": bound_scale if bound_scale is not None else cfg.get("bound_scale", 1.0),
    }
    for key in ("n_pairs", "n_probes", "n_series_probes", "symmetry_samples"):
        if key in samples:
            kw[key] = samples[key]
    try:
        return TheoremCheckConfig(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
