"""Run configuration shared by the command line tools and verify suites."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, fields, replace
from typing import Optional

from .cyl import EPS_COEFF, EPS_FREQ, SchemaError

OUTDIR_ENV = "BOHRWIGNER_OUTDIR"


@dataclass(frozen=True)
class RunConfig:
    """Tolerances, scheme constants, seed, output directory.

    aps_k has no default on purpose: the unitary shift is parametrized by
    a constant the caller must choose.
    """

    eps_freq: float = EPS_FREQ
    eps_coeff: float = EPS_COEFF
    quad_tol: float = 1e-10
    area_constant: float = 3.0 * math.sqrt(3.0)
    mu0: float = 1.5 * math.sqrt(3.0)
    aps_k: Optional[float] = None
    seed: int = 0
    outdir: str = "."


_FIELD_NAMES = {f.name for f in fields(RunConfig)}
_FLOAT_FIELDS = {"eps_freq", "eps_coeff", "quad_tol", "area_constant", "mu0", "aps_k"}


def config_from_file(path: str) -> dict:
    """Partial config from a JSON file; unknown or mistyped keys are errors."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise SchemaError("config file must hold a JSON object")
    out = {}
    for key, value in data.items():
        if key not in _FIELD_NAMES:
            raise SchemaError(f"unknown config key {key!r}")
        if key == "seed":
            if isinstance(value, bool) or not isinstance(value, int):
                raise SchemaError("seed must be an integer")
            out[key] = value
        elif key == "outdir":
            if not isinstance(value, str):
                raise SchemaError("outdir must be a string")
            out[key] = value
        elif key in _FLOAT_FIELDS:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise SchemaError(f"config key {key!r} must be a number")
            out[key] = float(value)
    return out


def resolve_config(file_path: Optional[str], flag_values: dict) -> RunConfig:
    """Defaults, then environment output dir, then file, then explicit flags."""
    cfg = RunConfig()
    env_outdir = os.environ.get(OUTDIR_ENV)
    if env_outdir:
        cfg = replace(cfg, outdir=env_outdir)
    if file_path is not None:
        cfg = replace(cfg, **config_from_file(file_path))
    explicit = {k: v for k, v in flag_values.items() if v is not None}
    if explicit:
        cfg = replace(cfg, **explicit)
    return cfg
