"""Experiment configuration for the command line front end.

A config is a flat JSON object. Every field can also be set with a command
line flag of the same name; precedence is defaults < preset < config file <
flags.
"""
from __future__ import annotations

import json
import math
from dataclasses import MISSING, asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

from .errors import ConfigError

MODELS = ("heisenberg", "general")
PACKETS = ("gaussian", "point", "design", "cube_root")
FORMATS = ("csv", "json", "both")


def _opt(kind, default, help_text):
    if isinstance(default, list):
        return field(default_factory=lambda: list(default), metadata={"kind": kind, "help": help_text})
    return field(default=default, metadata={"kind": kind, "help": help_text})


@dataclass
class ExperimentConfig:
    model: str = _opt(str, "heisenberg", "heisenberg or general")
    chi: float = _opt(float, 0.25, "Heisenberg coupling")
    c0: float = _opt(float, 0.0, "general model coefficient")
    c1: float = _opt(float, 0.0, "general model coefficient")
    c2: float = _opt(float, 0.0, "general model coefficient")
    d1: float = _opt(float, 0.0, "general model coefficient")
    d2: float = _opt(float, 0.0, "general model coefficient")
    e1: float = _opt(float, 0.0, "general model coefficient")
    f1: float = _opt(float, 0.0, "general model coefficient")
    n_sites: int = _opt(int, 100, "ring size N")
    n_list: list = _opt("int_list", [], "ring sizes for the scaling sweep")
    packet: str = _opt(str, "gaussian", "gaussian, point, design or cube_root")
    center_site: int = _opt(int, 1, "Alice's centre site (1-based)")
    k0: Optional[float] = _opt(float, None, "carrier wavenumber (default: fastest)")
    delta_sites: float = _opt(float, 2.5, "Gaussian width parameter in sites")
    window: Optional[int] = _opt(int, None, "Alice's window width in sites (default min(10, N))")
    bob_center: Optional[int] = _opt(int, None, "Bob's centre site (default 1 + N//2)")
    bob_window: Optional[int] = _opt(int, None, "Bob's window width (default: Alice's)")
    kappa: float = _opt(float, math.sqrt(2.0), "spread budget for designed packets")
    distance: float = _opt(float, 0.5, "travel distance in ring lengths")
    delta_coeff: float = _opt(float, 1.0, "cube_root packet: delta = coeff * N^(1/3) sites")
    cut_coeff: float = _opt(float, 2.0, "cube_root packet: cut coeff * N^(1/3) sites each side")
    t_max: Optional[float] = _opt(float, None, "final time (default: arrival time)")
    t_steps: int = _opt(int, 101, "number of samples in [0, t_max]")
    times: Optional[list] = _opt("float_list", None, "explicit ascending time grid")
    t_lo: Optional[float] = _opt(float, None, "optimise: start of the decode-time range")
    t_hi: Optional[float] = _opt(float, None, "optimise: end of the decode-time range")
    samples: int = _opt(int, 41, "optimise: grid points over the time range")
    mass: float = _opt(float, 0.95, "probability mass defining packet width")
    tau: float = _opt(float, 0.95, "average-fidelity threshold")
    n_random: int = _opt(int, 20, "verify: random states per check")
    negative_control: bool = _opt(bool, False, "verify: add a site-1 field that breaks translation symmetry")
    seed: int = _opt(int, 0, "seed for randomised checks")
    out_dir: str = _opt(str, "spinwire-out", "output directory")
    format: str = _opt(str, "both", "csv, json or both")
    quiet: bool = _opt(bool, False, "suppress console output")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, record: dict, base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
        kinds = field_kinds()
        unknown = set(record) - set(kinds)
        if unknown:
            name = sorted(unknown)[0]
            raise ConfigError(name, "unknown field")
        values = {name: coerce(name, kinds[name], value) for name, value in record.items()}
        return replace(base or cls(), **values)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str, base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        if not isinstance(record, dict):
            raise ConfigError("config", "top level must be a JSON object")
        return cls.from_dict(record, base)

    @classmethod
    def load(cls, path, base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
        return cls.from_json(Path(path).read_text(encoding="utf-8"), base)


def field_kinds() -> dict:
    return {f.name: f.metadata["kind"] for f in fields(ExperimentConfig)}


def field_help() -> dict:
    return {f.name: f.metadata["help"] for f in fields(ExperimentConfig)}


def field_default(name: str):
    f = next(f for f in fields(ExperimentConfig) if f.name == name)
    return f.default_factory() if f.default is MISSING else f.default


def coerce(name: str, kind, value):
    if value is None:
        return None
    try:
        if kind == "int_list":
            items = value.split(",") if isinstance(value, str) else value
            return [_as_int(v) for v in items if str(v).strip() != ""]
        if kind == "float_list":
            items = value.split(",") if isinstance(value, str) else value
            return [float(v) for v in items if str(v).strip() != ""]
        if kind is bool:
            if isinstance(value, str):
                if value.lower() in ("1", "true", "yes", "on"):
                    return True
                if value.lower() in ("0", "false", "no", "off"):
                    return False
                raise ValueError(value)
            return bool(value)
        if kind is int:
            return _as_int(value)
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(name, f"cannot interpret {value!r} as {getattr(kind, '__name__', kind)}") from None


def _as_int(v) -> int:
    f = float(v)
    if f != int(f):
        raise ValueError(v)
    return int(f)


DEFAULT_WINDOW = 10


def window_sites(cfg: ExperimentConfig, n_sites: int) -> int:
    return min(cfg.window if cfg.window is not None else DEFAULT_WINDOW, n_sites)


PRESETS = {
    "fig1": {
        "model": "heisenberg",
        "chi": 0.25,
        "n_sites": 100,
        "packet": "point",
        "center_site": 50,
        "window": 10,
        "t_max": 100.0,
        "t_steps": 101,
    },
    "fig2": {
        "model": "heisenberg",
        "chi": 0.25,
        "n_sites": 100,
        "packet": "gaussian",
        "center_site": 1,
        "k0": 25.0,
        "delta_sites": 2.5,
        "window": 10,
        "t_max": 100.0,
        "t_steps": 101,
    },
    "fig3": {
        "model": "heisenberg",
        "chi": 0.25,
        "n_list": [50, 100, 200, 500, 1000, 2000, 5000],
        "packet": "cube_root",
        "center_site": 1,
        "delta_coeff": 1.0,
        "cut_coeff": 2.0,
    },
}


def preset(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return ExperimentConfig.from_dict(PRESETS[name])


def _require(cond: bool, name: str, message: str) -> None:
    if not cond:
        raise ConfigError(name, message)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    n = cfg.n_sites
    _require(cfg.model in MODELS, "model", f"must be one of {MODELS}")
    _require(cfg.packet in PACKETS, "packet", f"must be one of {PACKETS}")
    _require(cfg.format in FORMATS, "format", f"must be one of {FORMATS}")
    _require(n >= 2, "n_sites", "must be at least 2")
    _require(all(m >= 2 for m in cfg.n_list), "n_list", "ring sizes must be at least 2")
    _require(1 <= cfg.center_site <= n, "center_site", f"must lie in [1, {n}]")
    if cfg.bob_center is not None:
        _require(1 <= cfg.bob_center <= n, "bob_center", f"must lie in [1, {n}]")
    if cfg.window is not None:
        _require(1 <= cfg.window <= n, "window", f"must lie in [1, {n}]")
    if cfg.bob_window is not None:
        _require(1 <= cfg.bob_window <= n, "bob_window", f"must lie in [1, {n}]")
    _require(cfg.delta_sites > 0, "delta_sites", "must be positive")
    _require(cfg.delta_coeff > 0, "delta_coeff", "must be positive")
    _require(cfg.cut_coeff >= 0, "cut_coeff", "must be nonnegative")
    _require(cfg.kappa > 1, "kappa", "must exceed 1")
    _require(cfg.distance > 0, "distance", "must be positive")
    _require(0.5 <= cfg.tau <= 1.0, "tau", "must lie in [0.5, 1]")
    _require(0.0 < cfg.mass < 1.0, "mass", "must lie in (0, 1)")
    _require(cfg.samples >= 2, "samples", "must be at least 2")
    _require(cfg.n_random >= 1, "n_random", "must be at least 1")
    if cfg.times is not None:
        _require(len(cfg.times) > 0, "times", "time grid is empty")
        _require(all(b > a for a, b in zip(cfg.times, cfg.times[1:])), "times", "must be strictly ascending")
        _require(cfg.times[0] >= 0, "times", "must be nonnegative")
    else:
        _require(cfg.t_steps >= 1, "t_steps", "time grid is empty")
    if cfg.t_max is not None:
        _require(cfg.t_max >= 0, "t_max", "must be nonnegative")
    if cfg.t_lo is not None and cfg.t_hi is not None:
        _require(cfg.t_lo <= cfg.t_hi, "t_lo", "must not exceed t_hi")
    return cfg
