"""
Runtime settings

Values come from the environment (a local .env file is honoured) and
can be overridden field by field from the command line.
"""

import os
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigError

# Load environment variables
load_dotenv()


@dataclass(frozen=True)
class Settings:
    log_level: str = "WARNING"
    surface_config: Optional[str] = None
    gap_budget: int = 8
    gap_slack: int = 4
    max_steps: int = 64
    classify_budget: int = 12
    convergents: int = 24
    cutting_depth: int = 4096
    mcg_bound: int = 4
    precision: int = 50
    seed: int = 0

    def with_overrides(self, **overrides) -> "Settings":
        """Return a copy with every non-None override applied."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes)


def _int_env(key: str, default: int) -> int:
    raw = os.getenv(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw!r}")


def load_settings() -> Settings:
    """Build Settings from BOUNDARY_* environment variables."""
    surface = os.getenv("BOUNDARY_SURFACE_CONFIG") or None
    settings = Settings(
        log_level=os.getenv("BOUNDARY_LOG_LEVEL", "WARNING").upper(),
        surface_config=surface,
        gap_budget=_int_env("BOUNDARY_GAP_BUDGET", 8),
        gap_slack=_int_env("BOUNDARY_GAP_SLACK", 4),
        max_steps=_int_env("BOUNDARY_MAX_STEPS", 64),
        classify_budget=_int_env("BOUNDARY_CLASSIFY_BUDGET", 12),
        convergents=_int_env("BOUNDARY_CONVERGENTS", 24),
        cutting_depth=_int_env("BOUNDARY_CUTTING_DEPTH", 4096),
        mcg_bound=_int_env("BOUNDARY_MCG_BOUND", 4),
        precision=_int_env("BOUNDARY_PRECISION", 50),
        seed=_int_env("BOUNDARY_SEED", 0),
    )
    for key in ("gap_budget", "gap_slack", "max_steps", "classify_budget",
                "convergents", "cutting_depth", "mcg_bound", "precision"):
        if getattr(settings, key) < 0:
            raise ConfigError(f"BOUNDARY_{key.upper()} must be non-negative")
    return settings


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
