"""Runtime configuration.

Settings come from the environment (UDG_CLIQUE_THREADS) and CLI flags. The
module-level CHECKS_ENABLED flag switches the O(m^2) invariant checks that
solvers run on every subproblem; the bench harness turns it off for timing.
"""

import logging
import os
from dataclasses import dataclass
from typing import Mapping

from src.constants import THREADS_ENV_VAR
from src.errors import InputError

logger = logging.getLogger(__name__)

# Global switch for debug-only invariant checks (set by apply_settings)
CHECKS_ENABLED = True


@dataclass(frozen=True)
class Settings:
    threads: int = 1
    checks: bool = True
    debug: bool = False
    verbose: bool = False


def _parse_threads(raw: str) -> int:
    try:
        threads = int(raw)
    except ValueError:
        raise InputError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}")
    if threads < 1:
        raise InputError(f"{THREADS_ENV_VAR} must be >= 1, got {threads}")
    return threads


def load_settings(environ: Mapping[str, str] | None = None, **overrides) -> Settings:
    """
    Build Settings from the environment, then apply explicit overrides.

    Overrides with value None are ignored so argparse namespaces can be
    passed through unchanged.
    """
    if environ is None:
        environ = os.environ

    raw_threads = environ.get(THREADS_ENV_VAR)
    threads = _parse_threads(raw_threads) if raw_threads else (os.cpu_count() or 1)

    values = {"threads": threads}
    values.update({key: val for key, val in overrides.items() if val is not None})
    if values["threads"] < 1:
        raise InputError(f"threads must be >= 1, got {values['threads']}")

    settings = Settings(**values)
    logger.debug(f"Loaded settings: {settings}")
    return settings


def apply_settings(settings: Settings) -> None:
    """Install process-wide flags derived from settings."""
    global CHECKS_ENABLED
    CHECKS_ENABLED = settings.checks


def checks_enabled() -> bool:
    return CHECKS_ENABLED
