import os
import sys
from typing import Optional

from diskcache import Cache
from loguru import logger

ZETA_ZEROS_DIR = os.getenv("ZETA_ZEROS_DIR")
CACHE_DIR = os.getenv("ZETABOUNDS_CACHE_DIR", "./cache_dir")
NO_CACHE = os.getenv("ZETABOUNDS_NO_CACHE", "0") not in ("", "0", "false", "False")
LOG_LEVEL = os.getenv("ZETABOUNDS_LOG_LEVEL", "WARNING")
LOG_FILE = os.getenv("ZETABOUNDS_LOG_FILE")
METRICS_PORT = os.getenv("ZETABOUNDS_METRICS_PORT")

_CACHE: Optional[Cache] = None


def get_cache() -> Optional[Cache]:
    """
    Shared disk cache for expensive deterministic results (sieves, the
    five-delta optimum). Returns None when caching is disabled.
    """
    global _CACHE
    if NO_CACHE:
        return None
    if _CACHE is None:
        _CACHE = Cache(CACHE_DIR)
        logger.debug(f"Opened disk cache at {CACHE_DIR}")
    return _CACHE


def setup_logging(level: Optional[str] = None) -> None:
    """Configure loguru sinks for command-line use."""
    logger.remove()
    logger.add(sys.stderr, level=level or LOG_LEVEL)
    if LOG_FILE:
        logger.add(LOG_FILE, rotation="1 MB", retention="10 days", level="INFO")


def metrics_port() -> Optional[int]:
    if not METRICS_PORT:
        return None
    try:
        return int(METRICS_PORT)
    except ValueError:
        logger.warning(f"Ignoring invalid ZETABOUNDS_METRICS_PORT={METRICS_PORT!r}")
        return None
