"""Runtime settings with flag > environment > file > default precedence."""
from __future__ import annotations

import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, replace

ENV_PREFIX = "MOTIVIX_"

_DEFAULTS = {
    "digits": 30,
    "precision_cap": 120,
    "max_weight": 12,
    "jobs": 0,  # 0 means use the logical core count
    "period_table": "",
    "config_file": "",
}

_INT_KEYS = ("digits", "precision_cap", "max_weight", "jobs")


@dataclass(frozen=True)
class Settings:
    digits: int = _DEFAULTS["digits"]
    precision_cap: int = _DEFAULTS["precision_cap"]
    max_weight: int = _DEFAULTS["max_weight"]
    jobs: int = _DEFAULTS["jobs"]
    period_table: str = _DEFAULTS["period_table"]

    def effective_jobs(self) -> int:
        return self.jobs if self.jobs > 0 else (os.cpu_count() or 1)


def _from_file(path: str) -> dict:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    out = {}
    for key in _DEFAULTS:
        if key in data:
            out[key] = data[key]
        dashed = key.replace("_", "-")
        if dashed in data:
            out[key] = data[dashed]
    return out


def _from_env() -> dict:
    out = {}
    for key in _DEFAULTS:
        raw = os.environ.get(ENV_PREFIX + key.upper())
        if raw is not None:
            out[key] = raw
    return out


def resolve_settings(flags: dict | None = None) -> Settings:
    """Merge defaults, config file, environment, and explicit flags.

    A config file named by the flag `config_file`, the MOTIVIX_CONFIG_FILE
    variable, or ./motivix.toml (when present) supplies the file layer."""
    flags = {k: v for k, v in (flags or {}).items() if v is not None}
    merged = dict(_DEFAULTS)
    env = _from_env()

    path = flags.get("config_file") or env.get("config_file") or ""
    if not path and os.path.exists("motivix.toml"):
        path = "motivix.toml"
    if path:
        merged.update(_from_file(path))
    merged.update(env)
    merged.update(flags)

    for key in _INT_KEYS:
        merged[key] = int(merged[key])
    merged.pop("config_file", None)
    return Settings(**merged)


_current = Settings()


def current_settings() -> Settings:
    return _current


def set_settings(s: Settings) -> Settings:
    global _current
    _current = s
    return s


def adjust(**kwargs) -> Settings:
    return set_settings(replace(_current, **kwargs))
