"""Flat ``key = value`` configuration files for the command line.

One assignment per line, ``#`` starts a comment, keys are lowercase
identifiers.  Values stay raw strings until a typed accessor converts
them, so every conversion failure can point at the offending line.
Fractions are written ``num/den`` and integer tuples as comma lists.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .errors import ConfigError

_KEY_RE = re.compile(r"^[a-z][a-z0-9_]*$")
_MISSING = object()


@dataclass
class Config:
    """Parsed configuration with per-key line numbers for diagnostics."""

    path: str
    values: Dict[str, str] = field(default_factory=dict)
    lines: Dict[str, int] = field(default_factory=dict)
    raw: bytes = b""

    def sha256(self) -> str:
        return hashlib.sha256(self.raw).hexdigest()

    def line_of(self, key: str) -> Optional[int]:
        return self.lines.get(key)

    def has(self, key: str) -> bool:
        return key in self.values

    def check_keys(self, allowed) -> None:
        """Reject unknown keys, pointing at the first offender's line."""
        allowed = set(allowed)
        for key in self.values:
            if key not in allowed:
                raise ConfigError(
                    f"unknown key {key!r}; expected one of "
                    f"{', '.join(sorted(allowed))}", self.lines[key])

    def _raw(self, key: str, default):
        if key in self.values:
            return self.values[key]
        if default is _MISSING:
            raise ConfigError(f"missing required key {key!r}")
        return None

    def get_str(self, key: str, default=_MISSING) -> Optional[str]:
        raw = self._raw(key, default)
        return raw if raw is not None else default

    def get_int(self, key: str, default=_MISSING) -> Optional[int]:
        raw = self._raw(key, default)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"key {key!r} needs an integer, got {raw!r}",
                              self.lines[key])

    def get_float(self, key: str, default=_MISSING) -> Optional[float]:
        raw = self._raw(key, default)
        if raw is None:
            return default
        try:
            return float(Fraction(raw)) if "/" in raw else float(raw)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"key {key!r} needs a number, got {raw!r}",
                              self.lines[key])

    def get_fraction(self, key: str, default=_MISSING) -> Optional[Fraction]:
        raw = self._raw(key, default)
        if raw is None:
            return default
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(
                f"key {key!r} needs an exact rational like 1/2, got {raw!r}",
                self.lines[key])

    def get_int_tuple(self, key: str, default=_MISSING) -> Optional[Tuple[int, ...]]:
        raw = self._raw(key, default)
        if raw is None:
            return default
        try:
            return tuple(int(part) for part in raw.split(","))
        except ValueError:
            raise ConfigError(
                f"key {key!r} needs a comma list of integers, got {raw!r}",
                self.lines[key])

    def get_bool(self, key: str, default=_MISSING) -> Optional[bool]:
        raw = self._raw(key, default)
        if raw is None:
            return default
        lowered = raw.lower()
        if lowered in ("true", "yes", "1"):
            return True
        if lowered in ("false", "no", "0"):
            return False
        raise ConfigError(f"key {key!r} needs true or false, got {raw!r}",
                          self.lines[key])


def parse_config_text(text: str, path: str = "<string>") -> Config:
    cfg = Config(path=path, raw=text.encode("utf-8"))
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected key = value, got {stripped!r}",
                              lineno)
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if not _KEY_RE.match(key):
            raise ConfigError(f"bad key name {key!r}", lineno)
        if not value:
            raise ConfigError(f"key {key!r} has an empty value", lineno)
        if key in cfg.values:
            raise ConfigError(
                f"duplicate key {key!r} (first set on line {cfg.lines[key]})",
                lineno)
        cfg.values[key] = value
        cfg.lines[key] = lineno
    return cfg


def parse_config(path: str) -> Config:
    """Read and parse a config file; I/O problems become ConfigError."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError(f"config {path!r} is not UTF-8: {exc}")
    cfg = parse_config_text(text, path)
    cfg.raw = raw
    return cfg
