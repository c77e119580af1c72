"""Optional ``key = value`` configuration file.

Flags override the file, which overrides the built-in defaults.  Example::

    # arbpulse.conf
    tol_defect = 1e-9
    sn_cap = 6
    sk_max_level = 12
    eps_start = 1e-3
    eps_stop = 0.5
    points = 61
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .analysis import DEFAULT_GRID
from .series import TOL_DEFECT
from .sk import MAX_LEVEL
from .ts import MAX_SN_LEVEL

_SECTION = "arbpulse"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Settings:
    tol_defect: float = TOL_DEFECT
    sn_cap: int = MAX_SN_LEVEL
    sk_max_level: int = MAX_LEVEL
    eps_start: float = DEFAULT_GRID[0]
    eps_stop: float = DEFAULT_GRID[1]
    points: int = DEFAULT_GRID[2]
    scaling_max_order: int = 16


def load_settings(path: Optional[str] = None) -> Settings:
    """Defaults, overridden by ``path`` when given.  Unknown keys are rejected."""
    settings = Settings()
    if path is None:
        return settings
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        # plain key = value files have no section header; supply one
        parser.read_string(f"[{_SECTION}]\n{text}")
    except configparser.Error as exc:
        raise ConfigError(f"bad config {path}: {exc}") from None
    types = {f.name: f.type for f in fields(Settings)}
    updates = {}
    for key, raw in parser[_SECTION].items():
        if key not in types:
            raise ConfigError(f"unknown config key {key!r}")
        cast = int if types[key] in (int, "int") else float
        try:
            updates[key] = cast(raw)
        except ValueError:
            raise ConfigError(f"config key {key!r}: cannot parse {raw!r}") from None
    return replace(settings, **updates)
