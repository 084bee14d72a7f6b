"""Sweep axes read from ``<prefix>.<name>.{min,max,count,scale}`` keys."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Config, ConfigError


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]
    scale: str


def make_axis(name: str, lo: float, hi: float, count: int, scale: str = "linear") -> Axis:
    if count < 2:
        raise ConfigError(f"axis {name}: count must be >= 2, got {count}")
    if lo == hi:
        raise ConfigError(f"axis {name}: zero-length range (min = max = {lo})")
    if scale == "log":
        if lo <= 0 or hi <= 0:
            raise ConfigError(f"axis {name}: log scale needs positive bounds")
        vals = np.logspace(np.log10(lo), np.log10(hi), count)
    elif scale == "linear":
        vals = np.linspace(lo, hi, count)
    else:
        raise ConfigError(f"axis {name}: scale must be linear or log, got {scale!r}")
    return Axis(name, tuple(float(v) for v in vals), scale)


def read_axis(cfg: Config, prefix: str, name: str, default: tuple[float, float, int, str] | None = None) -> Axis:
    base = f"{prefix}.{name}"
    d = default or (None, None, None, "linear")
    lo = cfg.float(f"{base}.min", d[0])
    hi = cfg.float(f"{base}.max", d[1])
    count = cfg.int(f"{base}.count", d[2])
    scale = cfg.str(f"{base}.scale", d[3], {"linear", "log"})
    return make_axis(name, lo, hi, count, scale)


def axis_names(cfg: Config, prefix: str) -> list[str]:
    """Axis names in order of first appearance."""
    first: dict[str, int] = {}
    for key in cfg.keys_under(prefix):
        parts = key.split(".")
        if len(parts) != 3:
            raise ConfigError(f"malformed axis key {key!r}", cfg.entries[key].where)
        pos = cfg.entries[key].pos
        first[parts[1]] = min(pos, first.get(parts[1], pos))
    return sorted(first, key=first.__getitem__)
