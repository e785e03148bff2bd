"""Simulation configuration: defaults, file parsing, flag overrides, validation.

Config files are INI-style ``key = value`` text with sections. Unknown
sections or keys are hard errors so that typos in parameter sweeps fail
loudly instead of silently running the defaults.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, fields, replace

ENV_SEED = "CFRAN_SEED"

VALID_OPTIONS = (1, 2, 3, 4, 5)


class ConfigError(ValueError):
    """Raised for malformed config files, unknown keys, or invariant violations."""


@dataclass(frozen=True)
class SimConfig:
    # topology
    n_odus: int = 2
    orus_per_odu: int = 4
    antennas_per_oru: int = 8
    area_width_m: float = 60.0
    area_height_m: float = 30.0
    carrier_frequency_hz: float = 2.6e9
    bandwidth_hz: float = 20e6
    # channel
    pl0_db: float = 40.0
    pl_exponent: float = 3.0
    d_min_m: float = 1.0
    shadowing_sigma_db: float = 4.0
    tx_power: float = 1.0
    noise_power: float | None = None  # None -> calibrated from the topology
    target_median_snr_db: float = 10.0
    # clustering
    edge_threshold_db: float = 6.0
    # campaign
    k_users: int = 10
    n_setups: int = 100
    options: tuple[int, ...] = (1, 2, 3, 4, 5)
    master_seed: int = 42
    threads: int = 0  # 0 -> machine parallelism
    channel_import: str | None = None
    # output
    out_dir: str = "results"


# section -> key -> parser. The section layout of config files; every key
# also has a CLI flag twin (see cli.py).
def _parse_options(text: str) -> tuple[int, ...]:
    items = [s for chunk in text.split(",") for s in chunk.split()]
    if not items:
        raise ValueError("empty option list")
    opts = tuple(sorted({int(s) for s in items}))
    return opts


def _parse_optional_float(text: str) -> float | None:
    if text.strip().lower() in ("", "auto", "none"):
        return None
    return float(text)


def _parse_optional_str(text: str) -> str | None:
    return text.strip() or None


_SCHEMA: dict[str, dict[str, tuple]] = {
    "topology": {
        "n_odus": (int,),
        "orus_per_odu": (int,),
        "antennas_per_oru": (int,),
        "area_width_m": (float,),
        "area_height_m": (float,),
        "carrier_frequency_hz": (float,),
        "bandwidth_hz": (float,),
    },
    "channel": {
        "pl0_db": (float,),
        "pl_exponent": (float,),
        "d_min_m": (float,),
        "shadowing_sigma_db": (float,),
        "tx_power": (float,),
        "noise_power": (_parse_optional_float,),
        "target_median_snr_db": (float,),
    },
    "clustering": {
        "edge_threshold_db": (float,),
    },
    "campaign": {
        "k_users": (int,),
        "n_setups": (int,),
        "options": (_parse_options,),
        "master_seed": (int,),
        "threads": (int,),
        "channel_import": (_parse_optional_str,),
    },
    "output": {
        "out_dir": (str,),
    },
}

_ALL_KEYS = {k for sec in _SCHEMA.values() for k in sec}


def read_config_file(path: str) -> dict:
    """Parse an INI-style config file into a {key: value} dict.

    Unknown sections/keys and unparseable values raise :class:`ConfigError`.
    An empty file yields an empty dict (all defaults).
    """
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc

    values: dict = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}] in {path}")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown config key '{key}' in section [{section}]")
            (conv,) = _SCHEMA[section][key]
            try:
                values[key] = conv(raw)
            except ValueError as exc:
                raise ConfigError(f"invalid value for '{key}': {raw!r} ({exc})") from exc
    return values


def validate(cfg: SimConfig) -> SimConfig:
    """Check all config invariants; error messages name the offending key."""
    for key in ("n_odus", "orus_per_odu", "antennas_per_oru", "k_users", "n_setups"):
        if getattr(cfg, key) < 1:
            raise ConfigError(f"{key} must be >= 1, got {getattr(cfg, key)}")
    for key in ("area_width_m", "area_height_m", "d_min_m", "tx_power", "pl_exponent"):
        if getattr(cfg, key) <= 0:
            raise ConfigError(f"{key} must be > 0, got {getattr(cfg, key)}")
    if cfg.shadowing_sigma_db < 0:
        raise ConfigError(f"shadowing_sigma_db must be >= 0, got {cfg.shadowing_sigma_db}")
    if cfg.edge_threshold_db < 0:
        raise ConfigError(f"edge_threshold_db must be >= 0, got {cfg.edge_threshold_db}")
    if cfg.noise_power is not None and cfg.noise_power <= 0:
        raise ConfigError(f"noise_power must be > 0 or auto, got {cfg.noise_power}")
    if not cfg.options:
        raise ConfigError("options must be a non-empty subset of {1..5}")
    bad = sorted(set(cfg.options) - set(VALID_OPTIONS))
    if bad:
        raise ConfigError(f"options contains unknown deployment option(s) {bad}")
    if not 0 <= cfg.master_seed < 2**64:
        raise ConfigError(f"master_seed must fit in 64 bits, got {cfg.master_seed}")
    if cfg.threads < 0:
        raise ConfigError(f"threads must be >= 0, got {cfg.threads}")
    return cfg


def parse_config(path: str | None, overrides: dict | None = None) -> SimConfig:
    """Build a validated :class:`SimConfig` from an optional file plus overrides.

    Precedence per key: override flag > config file > CFRAN_SEED env var
    (master_seed only) > built-in default. ``path`` may be None or the
    literal string "default" to use the defaults.
    """
    values: dict = {}
    if path is not None and path != "default":
        values = read_config_file(path)

    if overrides:
        unknown = sorted(set(overrides) - _ALL_KEYS)
        if unknown:
            raise ConfigError(f"unknown override key(s): {unknown}")
        values.update({k: v for k, v in overrides.items() if v is not None})

    if "master_seed" not in values and ENV_SEED in os.environ:
        try:
            values["master_seed"] = int(os.environ[ENV_SEED])
        except ValueError as exc:
            raise ConfigError(f"{ENV_SEED} must be an integer, got {os.environ[ENV_SEED]!r}") from exc

    # flag values arrive as raw strings for list/optional keys
    try:
        if isinstance(values.get("options"), str):
            values["options"] = _parse_options(values["options"])
        if isinstance(values.get("noise_power"), str):
            values["noise_power"] = _parse_optional_float(values["noise_power"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    cfg = SimConfig(**values)
    return validate(cfg)


def config_echo(cfg: SimConfig) -> dict:
    """JSON-serializable echo of every config field, for output provenance."""
    out = {}
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        out[f.name] = list(v) if isinstance(v, tuple) else v
    return out


def with_updates(cfg: SimConfig, **updates) -> SimConfig:
    return validate(replace(cfg, **updates))
