"""
Runtime configuration.

Values come from the environment (optionally a .env file in the working
directory) with defaults suitable for desk-scale verification.
"""
import os
from dataclasses import dataclass, replace
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigError

# Load environment variables
load_dotenv()

DEFAULT_MAX_Q = 2 ** 20
DEFAULT_TOLERANCE = 1e-6
DEFAULT_NAIVE_CUTOFF = 4096


@dataclass(frozen=True)
class Settings:
    """Process-wide knobs. `tolerance` is relative: checks allow tolerance * q absolute error."""
    max_q: int = DEFAULT_MAX_Q
    tolerance: float = DEFAULT_TOLERANCE
    naive_cutoff: int = DEFAULT_NAIVE_CUTOFF
    log_level: str = "WARNING"


def _env(name: str, default, convert):
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return convert(raw)
    except ValueError:
        raise ConfigError(f"{name}={raw!r} is not a valid {convert.__name__}",
                          hypothesis=f"{name} parses as {convert.__name__}") from None


def load_settings() -> Settings:
    """Read settings from the environment; malformed values raise ConfigError naming the variable."""
    return Settings(
        max_q=_env("FROBTRACE_MAX_Q", DEFAULT_MAX_Q, int),
        tolerance=_env("FROBTRACE_TOLERANCE", DEFAULT_TOLERANCE, float),
        naive_cutoff=_env("FROBTRACE_NAIVE_CUTOFF", DEFAULT_NAIVE_CUTOFF, int),
        log_level=os.getenv("FROBTRACE_LOG_LEVEL", "WARNING").upper(),
    )


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create the global settings."""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def override_settings(**kwargs) -> Settings:
    """Replace fields of the global settings (used by CLI flags and tests)."""
    global _settings
    _settings = replace(get_settings(), **kwargs)
    return _settings


def reset_settings() -> None:
    global _settings
    _settings = None


def tolerance_for(q: int, tolerance: Optional[float] = None) -> float:
    """Absolute tolerance for a sum over F_q."""
    factor = get_settings().tolerance if tolerance is None else tolerance
    return factor * q
