"""Scenario configuration: project defaults, key = value files, environment."""

from __future__ import annotations

import math
import os
import re
from typing import Any

import yaml

from .errors import ConfigInvalid, ParseError
from .simulation.models import ScenarioConfig

DEFAULT_CONFIG_FILE = os.path.join(os.path.dirname(os.path.dirname(__file__)), "config.yaml")
_config_file: str | None = None

DATA_DIR = os.environ.get("ABSIM_DATA_DIR") or os.path.join(os.path.dirname(os.path.dirname(__file__)), "data")

FLOAT_FIELDS = ("g0", "delta", "flux", "v0")
INT_FIELDS = ("trials", "repetitions_per_trial", "seed", "sites", "steps", "workers")
BOOL_FIELDS = ("inverted",)
LIST_FIELDS = ("outputs",)

_PI = re.compile(
    r"^(?P<sign>[+-]?)\s*(?P<factor>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(?P<divisor>\d+(?:\.\d*)?))?$",
    re.IGNORECASE,
)
_TRUE = ("true", "yes", "on", "1")
_FALSE = ("false", "no", "off", "0")


def set_config_file(path: str) -> None:
    """Set the defaults file used by subsequent load calls."""
    global _config_file
    _config_file = path


def load_defaults(config_file: str | None = None) -> dict[str, Any]:
    """Field defaults: built-ins, overridden by the `defaults:` section of the YAML file."""
    path = config_file or _config_file or DEFAULT_CONFIG_FILE
    defaults: dict[str, Any] = {}
    if os.path.exists(path):
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        for name, raw in (data.get("defaults") or {}).items():
            if name not in ScenarioConfig.field_names() or name == "scenario":
                raise ConfigInvalid(name, f"not a default field in {path}")
            defaults[name] = coerce(name, raw)
    workers = os.environ.get("ABSIM_WORKERS")
    if workers:
        defaults["workers"] = coerce("workers", workers)
    return defaults


def parse_float(text: str) -> float:
    """Float with multiples of pi: `pi`, `-pi/2`, `2*pi`, `3pi/4`."""
    match = _PI.match(text.strip())
    if match is None:
        return float(text)
    value = math.pi * float(match["factor"] or 1.0)
    if match["divisor"] is not None:
        value /= float(match["divisor"])
    return -value if match["sign"] == "-" else value


def parse_int(text: str) -> int:
    """Integer; `1e5` style is accepted when it is integral."""
    try:
        return int(text.replace("_", ""))
    except ValueError:
        value = float(text)
        if not value.is_integer():
            raise
        return int(value)


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(f"not a boolean: {text!r}")


def coerce(name: str, raw: Any) -> Any:
    """Convert a text or YAML value to the type of field `name`.

    Raises:
        ConfigInvalid: if the value cannot be converted.
    """
    try:
        if name in LIST_FIELDS:
            items = raw.split(",") if isinstance(raw, str) else list(raw or [])
            return tuple(str(item).strip() for item in items if str(item).strip())
        if isinstance(raw, str):
            text = raw.strip()
            if name in FLOAT_FIELDS:
                return parse_float(text)
            if name in INT_FIELDS:
                return parse_int(text)
            if name in BOOL_FIELDS:
                return parse_bool(text)
            return text
        if name in FLOAT_FIELDS and isinstance(raw, int | float) and not isinstance(raw, bool):
            return float(raw)
        if name in INT_FIELDS and isinstance(raw, int) and not isinstance(raw, bool):
            return raw
        if name in BOOL_FIELDS and isinstance(raw, bool):
            return raw
        if name not in FLOAT_FIELDS + INT_FIELDS + BOOL_FIELDS and raw is not None:
            return str(raw)
    except (TypeError, ValueError) as e:
        raise ConfigInvalid(name, str(e)) from e
    raise ConfigInvalid(name, f"unexpected value {raw!r}")


def parse_config(text: str, defaults: dict[str, Any] | None = None) -> ScenarioConfig:
    """Parse the line-oriented `key = value` format.

    Blank lines and `#` comments are ignored. Keys are ScenarioConfig field
    names; each may appear once. Fields not given take the project
    defaults.

    Raises:
        ParseError: malformed line, unknown or repeated key, unreadable value.
        ConfigInvalid: a well-formed value outside its allowed range, or no scenario.
    """
    known = ScenarioConfig.field_names()
    values: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0]
        if not content.strip():
            continue
        if "=" not in content:
            raise ParseError(lineno, len(content) - len(content.lstrip()) + 1, "expected 'key = value'")
        key_part, value_part = content.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        if not key:
            raise ParseError(lineno, key_col, "missing key before '='")
        if key not in known:
            raise ParseError(lineno, key_col, f"unknown key {key!r}")
        if key in values:
            raise ParseError(lineno, key_col, f"duplicate key {key!r}")
        value_col = len(key_part) + 2 + len(value_part) - len(value_part.lstrip())
        if not value_part.strip():
            raise ParseError(lineno, value_col, f"missing value for {key!r}")
        try:
            values[key] = coerce(key, value_part)
        except ConfigInvalid as e:
            raise ParseError(lineno, value_col, f"bad value for {key!r}: {value_part.strip()!r}") from e
    return build_config(values, defaults)


def build_config(values: dict[str, Any], defaults: dict[str, Any] | None = None) -> ScenarioConfig:
    """Merge parsed fields over the defaults and validate."""
    if "scenario" not in values:
        raise ConfigInvalid("scenario", "required")
    merged = {**(load_defaults() if defaults is None else defaults), **values}
    return ScenarioConfig(**merged).validate()


def load_config(path: str, defaults: dict[str, Any] | None = None) -> ScenarioConfig:
    """Read a scenario file: key = value text, or a YAML mapping for .yaml/.yml."""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    if not path.endswith((".yaml", ".yml")):
        return parse_config(text, defaults)
    data = yaml.safe_load(text) or {}
    if not isinstance(data, dict):
        raise ParseError(1, 1, "YAML scenario file must be a mapping")
    known = ScenarioConfig.field_names()
    unknown = [k for k in data if k not in known]
    if unknown:
        raise ConfigInvalid(str(unknown[0]), "unknown key")
    return build_config({k: coerce(k, v) for k, v in data.items()}, defaults)


def report_path(cfg: ScenarioConfig, suffix: str = ".json") -> str:
    """Default output file under DATA_DIR for a run."""
    return os.path.join(DATA_DIR, f"{cfg.scenario}-seed{cfg.seed}{suffix}")
