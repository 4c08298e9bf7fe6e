import logging
import os

DEFAULT_ORDER = 4
MAX_CELLS_ENV = "LIEGIAMBELLI_MAX_CELLS"
DEFAULT_MAX_CELLS = 10 ** 7

logger = logging.getLogger(__name__)


def max_cells() -> int:
    """Enumeration cap, read from the environment on every call"""
    raw = os.environ.get(MAX_CELLS_ENV)
    if raw is None:
        return DEFAULT_MAX_CELLS
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {MAX_CELLS_ENV}={raw!r}: not an integer")
        return DEFAULT_MAX_CELLS
    if value <= 0:
        logger.warning(f"Ignoring {MAX_CELLS_ENV}={raw!r}: must be positive")
        return DEFAULT_MAX_CELLS
    return value
