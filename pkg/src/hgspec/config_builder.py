# src/hgspec/config_builder.py

from __future__ import annotations

from dataclasses import fields
from typing import Any, Dict

from .commands import get_command
from .errors import ParameterDomainError
from .run_configs import BaseRunConfig

# YAML/CLI spellings that differ from the dataclass field names.
KEY_ALIASES: Dict[str, str] = {
    "lambda": "lam",
    "N": "max_n",
    "maxN": "max_n",
    "ball_radius": "radius",
    "phi": "functional",
}

# Fields kept as text so exact inputs ("1/4", "sqrt(3)") survive YAML number parsing.
TEXT_FIELDS = {"r", "lam", "functional"}


def _normalize_key(key: str) -> str:
    key = str(key).replace("-", "_")
    return KEY_ALIASES.get(key, key)


def _coerce(name: str, value: Any, default: Any) -> Any:
    if value is None:
        return None
    if name in TEXT_FIELDS:
        return str(value)
    if isinstance(default, bool):
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes", "on")
        return bool(value)
    if isinstance(default, int):
        try:
            return int(value)
        except (TypeError, ValueError) as e:
            raise ParameterDomainError(f"{name} must be an integer, got {value!r}") from e
    if isinstance(default, float):
        try:
            return float(value)
        except (TypeError, ValueError) as e:
            raise ParameterDomainError(f"{name} must be a number, got {value!r}") from e
    return value


def split_known(command: str, raw: Dict[str, Any]) -> tuple[Dict[str, Any], list[str]]:
    """(kwargs for the command's config class, keys that were dropped)."""
    config_cls = get_command(command).config_cls
    valid = {f.name: f.default for f in fields(config_cls)}
    kwargs: Dict[str, Any] = {}
    ignored: list[str] = []
    for key, value in (raw or {}).items():
        name = _normalize_key(key)
        # functional-driven commands read a bare lambda as the geometric functional
        if name == "lam" and "lam" not in valid and "functional" in valid:
            if "functional" in raw:
                ignored.append(str(key))
                continue
            name = "functional"
        if name in valid:
            kwargs[name] = _coerce(name, value, valid[name])
        elif name != "command":
            ignored.append(str(key))
    return kwargs, ignored


def build_run_config(command: str, raw: Dict[str, Any]) -> BaseRunConfig:
    """
    Central factory: take a raw argument dict (from YAML or argparse) and
    return the command's config dataclass.

    Keys the dataclass does not define are dropped; use split_known() to see them.
    """
    kwargs, _ = split_known(command, raw)
    return get_command(command).config_cls(**kwargs)
