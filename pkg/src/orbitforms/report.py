"""Run configuration, verification reports, whitelist and result cache.

Reports are deterministic for a fixed (config, seed): checks are sorted by
name, exact values are serialized as rational strings that round-trip, and
wall-clock timing is excluded unless explicitly requested (it would break
byte-identity).  JSON is the canonical format; CSV is a lossy convenience
export for spectra only.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping

from .errors import DomainError

SCHEMA = "orbit-forms/1"
CACHE_ENV = "ORBITFORMS_CACHE"

_CONFIG_FIELDS = {
    "command": str,
    "suite": str,
    "model": str,
    "N": int,
    "nu": str, "nu2": str, "nu3": str, "mu": str,
    "b": str, "a": str, "omega": str, "beta": str,
    "n": int, "m": int,
    "f": str,
    "n_max": int,
    "seed": int,
    "tuples": int,
    "sample_points": int,
    "residual_tol": str,
    "orthogonality_tol": str,
    "constancy_tol": str,
    "fd_step": str,
    "dps": int,
    "format": str,
    "out": str,
    "cache_dir": str,
    "numeric_check": bool,
    "include_timings": bool,
}

_DEFAULTS = {
    "seed": 1,
    "tuples": 5,
    "sample_points": 50,
    "residual_tol": "1e-6",
    "orthogonality_tol": "1e-10",
    "constancy_tol": "1e-6",
    "dps": 40,
    "format": "json",
    "numeric_check": True,
    "include_timings": False,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated key-value configuration; exact parameters stay strings."""

    values: Mapping[str, object]

    @classmethod
    def from_items(cls, items: Mapping[str, object]) -> "RunConfig":
        clean: dict[str, object] = dict(_DEFAULTS)
        for key, raw in items.items():
            if raw is None:
                continue
            if key not in _CONFIG_FIELDS:
                raise DomainError(f"unknown configuration key {key!r}")
            typ = _CONFIG_FIELDS[key]
            if typ is bool and isinstance(raw, str):
                lowered = raw.strip().lower()
                if lowered not in ("true", "false", "0", "1"):
                    raise DomainError(f"bad boolean for {key!r}: {raw!r}")
                clean[key] = lowered in ("true", "1")
            else:
                try:
                    clean[key] = typ(raw)
                except (TypeError, ValueError) as exc:
                    raise DomainError(f"bad value for {key!r}: {raw!r}") from exc
        for key in ("nu", "nu2", "nu3", "mu", "b", "a", "omega", "beta"):
            if key in clean:
                Fraction(clean[key])   # must round-trip exactly
        return cls(clean)

    def get(self, key: str, default=None):
        return self.values.get(key, default)

    def fraction(self, key: str, default=None) -> Fraction | None:
        raw = self.values.get(key)
        if raw is None:
            return Fraction(default) if default is not None else None
        return Fraction(str(raw))

    # where the report goes is not part of what it says
    _NON_SEMANTIC = ("out", "cache_dir")

    def canonical(self) -> dict:
        return {k: self.values[k] for k in sorted(self.values)
                if k not in self._NON_SEMANTIC}

    def digest(self) -> str:
        payload = json.dumps({"schema": SCHEMA, "config": self.canonical()},
                             sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Flat key=value text; '#' starts a comment; unknown keys rejected later."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise DomainError(f"{path}:{lineno}: expected key=value")
        key, _, value = stripped.partition("=")
        out[key.strip()] = value.strip()
    return out


# ---------------------------------------------------------------------------
# Check records and the verification report
# ---------------------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
REPORTED = "reported-offset"


@dataclass
class CheckRecord:
    name: str
    status: str
    exact: dict = field(default_factory=dict)
    numeric: dict = field(default_factory=dict)
    witness: object = None
    details: str = ""
    whitelist_id: str | None = None
    timing_ms: float | None = None

    def as_json(self, include_timings: bool) -> dict:
        payload = {
            "name": self.name,
            "status": self.status,
            "exact": {k: str(v) for k, v in sorted(self.exact.items())},
            "numeric": {k: str(v) for k, v in sorted(self.numeric.items())},
            "witness": _jsonable(self.witness),
            "details": self.details,
            "whitelist_id": self.whitelist_id,
        }
        if include_timings and self.timing_ms is not None:
            payload["timing_ms"] = round(self.timing_ms, 3)
        return payload


def _jsonable(value):
    if value is None or isinstance(value, (str, int, float, bool)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return str(value)


@dataclass
class VerificationReport:
    config: RunConfig
    checks: list[CheckRecord]

    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, REPORTED: 0}
        for c in self.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
        return counts

    @property
    def ok(self) -> bool:
        return all(c.status in (PASS, REPORTED) for c in self.checks)

    def as_json(self) -> dict:
        include_timings = bool(self.config.get("include_timings"))
        return {
            "schema": SCHEMA,
            "command": self.config.get("command", "verify"),
            "config": self.config.canonical(),
            "checks": [c.as_json(include_timings)
                       for c in sorted(self.checks, key=lambda c: c.name)],
            "summary": self.summary(),
        }

    def to_bytes(self) -> bytes:
        return json.dumps(self.as_json(), sort_keys=True, indent=1).encode()


# ---------------------------------------------------------------------------
# Whitelist of recorded print-vs-engine offsets
# ---------------------------------------------------------------------------

def load_whitelist() -> dict:
    text = resources.files("orbitforms").joinpath("data/whitelist.json").read_text()
    return json.loads(text)["entries"]


def whitelisted(check: CheckRecord, whitelist: Mapping[str, dict]) -> bool:
    return check.whitelist_id is not None and check.whitelist_id in whitelist


# ---------------------------------------------------------------------------
# Result cache
# ---------------------------------------------------------------------------

def cache_dir(config: RunConfig) -> Path | None:
    explicit = config.get("cache_dir")
    if explicit:
        return Path(str(explicit))
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def cache_lookup(config: RunConfig) -> bytes | None:
    directory = cache_dir(config)
    if directory is None:
        return None
    path = directory / f"{config.digest()}.json"
    if path.exists():
        return path.read_bytes()
    return None


def cache_store(config: RunConfig, payload: bytes) -> None:
    directory = cache_dir(config)
    if directory is None:
        return
    directory.mkdir(parents=True, exist_ok=True)
    (directory / f"{config.digest()}.json").write_bytes(payload)
