"""Run configuration: grid, RNG seed and per-suite overrides, validated up front."""
from __future__ import annotations

from dataclasses import dataclass, field
import copy
import json
import os

from .grid import GridSpec

ENV_CONFIG = "PHASEQUANT_CONFIG"

DEFAULT_GRID = {"n": 256, "x_min": -16.0, "x_max": 16.0, "hbar": 1.0}
DEFAULT_SEED = 20240917
_TOP_KEYS = {"grid", "seed", "suites"}


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps it to exit status 2."""


@dataclass
class RunConfig:
    grid: GridSpec
    seed: int = DEFAULT_SEED
    suites: dict = field(default_factory=dict)
    source: str | None = None

    def suite(self, name):
        return self.suites.get(name, {})

    def to_dict(self):
        return {"grid": self.grid.to_dict(), "seed": self.seed, "suites": copy.deepcopy(self.suites)}


def config_from_dict(data, source=None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
    g = dict(DEFAULT_GRID)
    raw_grid = data.get("grid", {})
    if not isinstance(raw_grid, dict):
        raise ConfigError("'grid' must be an object")
    bad = set(raw_grid) - set(DEFAULT_GRID)
    if bad:
        raise ConfigError(f"unknown grid keys: {', '.join(sorted(bad))}")
    g.update(raw_grid)
    if isinstance(g["n"], bool) or not isinstance(g["n"], int):
        raise ConfigError(f"grid.n must be an integer, got {g['n']!r}")
    try:
        grid = GridSpec(g["n"], float(g["x_min"]), float(g["x_max"]), float(g["hbar"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid grid: {exc}") from None
    seed = data.get("seed", DEFAULT_SEED)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")
    suites = data.get("suites", {})
    if not isinstance(suites, dict) or not all(isinstance(v, dict) for v in suites.values()):
        raise ConfigError("'suites' must map suite names to objects")
    return RunConfig(grid, seed, suites, source)


def load_config(path=None) -> RunConfig:
    """Load ``path``, else ``$PHASEQUANT_CONFIG``, else the built-in defaults."""
    path = path or os.environ.get(ENV_CONFIG)
    if not path:
        return config_from_dict({})
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return config_from_dict(data, source=path)
