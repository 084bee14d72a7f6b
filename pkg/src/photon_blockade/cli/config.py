"""Flat ``key = value`` configuration files.

Grammar, one entry per line::

    # comment
    model = tpb
    params.J = 0.1
    axis.delta.min = -0.5        # trailing comments allowed

Keys are dotted identifiers. Values are taken verbatim (trimmed) and
converted on access. A key may appear only once per file; ``--set`` overrides
replace file entries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*$")


class ConfigError(ValueError):
    def __init__(self, message: str, where: str | None = None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


@dataclass
class Entry:
    value: str
    where: str
    pos: int = 0


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ", ".join(format_value(x) for x in v)
    return str(v)


def _recorded(fn):
    def wrapper(self, key, *args, **kwargs):
        value = fn(self, key, *args, **kwargs)
        self.resolved[key] = format_value(value)
        return value

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@dataclass
class Config:
    entries: dict[str, Entry] = field(default_factory=dict)
    _used: set[str] = field(default_factory=set)
    # every value actually read, defaults included, for self-describing output
    resolved: dict[str, str] = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str, source: str = "<config>") -> Config:
        cfg = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            where = f"{source}:{lineno}"
            key, value = _split(line, where)
            if key in cfg.entries:
                raise ConfigError(f"duplicate key {key!r} (first at {cfg.entries[key].where})", where)
            cfg.entries[key] = Entry(value, where, len(cfg.entries))
        return cfg

    def override(self, assignment: str, index: int) -> None:
        where = f"--set #{index}"
        key, value = _split(assignment, where)
        pos = self.entries[key].pos if key in self.entries else len(self.entries)
        self.entries[key] = Entry(value, where, pos)

    def has(self, key: str) -> bool:
        return key in self.entries

    def keys_under(self, prefix: str) -> list[str]:
        p = prefix + "."
        return sorted(k for k in self.entries if k.startswith(p))

    def raw(self, key: str) -> Entry | None:
        e = self.entries.get(key)
        if e is not None:
            self._used.add(key)
        return e

    @_recorded
    def str(self, key: str, default: str | None = None, choices=None) -> str:
        e = self.raw(key)
        if e is None:
            if default is None:
                raise ConfigError(f"missing required key {key!r}")
            return default
        if choices is not None and e.value not in choices:
            raise ConfigError(f"{key} must be one of {sorted(choices)}, got {e.value!r}", e.where)
        return e.value

    @_recorded
    def float(self, key: str, default: float | None = None) -> float:
        e = self.raw(key)
        if e is None:
            if default is None:
                raise ConfigError(f"missing required key {key!r}")
            return float(default)
        try:
            return float(e.value)
        except ValueError:
            raise ConfigError(f"{key}: not a number: {e.value!r}", e.where) from None

    @_recorded
    def int(self, key: str, default: int | None = None) -> int:
        e = self.raw(key)
        if e is None:
            if default is None:
                raise ConfigError(f"missing required key {key!r}")
            return int(default)
        try:
            return int(e.value)
        except ValueError:
            raise ConfigError(f"{key}: not an integer: {e.value!r}", e.where) from None

    @_recorded
    def bool(self, key: str, default: bool) -> bool:
        e = self.raw(key)
        if e is None:
            return default
        v = e.value.lower()
        if v in ("true", "yes", "1", "on"):
            return True
        if v in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"{key}: not a boolean: {e.value!r}", e.where)

    @_recorded
    def list(self, key: str, default: list[str]) -> list[str]:
        e = self.raw(key)
        if e is None:
            return list(default)
        items = [x.strip() for x in e.value.split(",")]
        if not all(items):
            raise ConfigError(f"{key}: empty list item", e.where)
        return items

    @_recorded
    def float_list(self, key: str, default: list[float]) -> list[float]:
        e = self.entries.get(key)
        items = self.list(key, [repr(x) for x in default])
        try:
            return [float(x) for x in items]
        except ValueError:
            raise ConfigError(f"{key}: list of numbers expected", e.where if e else None) from None

    def check_all_used(self) -> None:
        unknown = sorted(set(self.entries) - self._used, key=lambda k: self.entries[k].pos)
        if unknown:
            k = unknown[0]
            raise ConfigError(f"unknown key {k!r}", self.entries[k].where)


def _split(line: str, where: str) -> tuple[str, str]:
    if "=" not in line:
        raise ConfigError(f"expected 'key = value', got {line!r}", where)
    key, value = (s.strip() for s in line.split("=", 1))
    if not _KEY.match(key):
        raise ConfigError(f"invalid key {key!r}", where)
    if not value:
        raise ConfigError(f"empty value for {key!r}", where)
    return key, value
