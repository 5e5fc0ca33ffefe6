# =========================
# FILE: burnkit/config.py
# =========================
"""Runtime settings: defaults, overridden by the environment (.env), overridden by flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

GIB = 1 << 30

DEFAULT_MEMORY_CAP = 4 * GIB
DEFAULT_THREADS = 1
DEFAULT_EXACT_BUDGET = 10 ** 8
DEFAULT_TIME_LIMIT_S = 600.0


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.environ.get(name, "").strip() or default)
    except (TypeError, ValueError):
        return default


def _env_float(name: str, default: float) -> float:
    try:
        return float(os.environ.get(name, "").strip() or default)
    except (TypeError, ValueError):
        return default


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class Settings:
    memory_cap: int = DEFAULT_MEMORY_CAP
    threads: int = DEFAULT_THREADS
    exact_budget: int = DEFAULT_EXACT_BUDGET
    time_limit: float = DEFAULT_TIME_LIMIT_S
    quiet: bool = False
    debug: bool = False


def load_settings(
    memory_cap: Optional[int] = None,
    threads: Optional[int] = None,
    exact_budget: Optional[int] = None,
    time_limit: Optional[float] = None,
    quiet: Optional[bool] = None,
) -> Settings:
    """Environment first, then whatever the caller passed explicitly."""
    base = Settings(
        memory_cap=max(0, _env_int("BURNKIT_MEMORY_CAP", DEFAULT_MEMORY_CAP)),
        threads=max(1, _env_int("BURNKIT_THREADS", DEFAULT_THREADS)),
        exact_budget=max(1, _env_int("BURNKIT_EXACT_BUDGET", DEFAULT_EXACT_BUDGET)),
        time_limit=_env_float("BURNKIT_TIME_LIMIT", DEFAULT_TIME_LIMIT_S),
        quiet=_env_flag("BURNKIT_QUIET"),
        debug=_env_flag("BURNKIT_DEBUG"),
    )
    overrides = {
        key: value
        for key, value in (
            ("memory_cap", memory_cap),
            ("threads", threads),
            ("exact_budget", exact_budget),
            ("time_limit", time_limit),
            ("quiet", quiet),
        )
        if value is not None
    }
    settings = replace(base, **overrides)
    if settings.time_limit <= 0:
        raise ValueError(f"time limit must be positive, got {settings.time_limit}")
    if settings.threads < 1:
        raise ValueError(f"threads must be at least 1, got {settings.threads}")
    return settings
