import os
import logging
from pythonjsonlogger import jsonlogger

_HANDLER_NAME = "wres-json"


def setup_structured_logging(level=None):
    """Attach a single JSON handler to the root logger (idempotent)."""
    root = logging.getLogger()
    level = (level or os.getenv("WRES_LOG_LEVEL", "WARNING")).upper()
    root.setLevel(level)
    if any(getattr(h, "name", None) == _HANDLER_NAME for h in root.handlers):
        return root
    handler = logging.StreamHandler()
    handler.name = _HANDLER_NAME
    formatter = jsonlogger.JsonFormatter(
        '%(asctime)s %(name)s %(levelname)s %(message)s %(depth)s %(chart)s'
    )
    handler.setFormatter(formatter)
    root.addHandler(handler)
    return root


# Call it immediately
setup_structured_logging()

from .algebra import Ring, Poly, PolyMap, rat  # noqa: E402
from .parser import parse, parse_ring, parse_point  # noqa: E402
from .localideal import Ideal  # noqa: E402
from .invariant import Invariant, invariant_at, center_from, reduce_center  # noqa: E402
from .resolve import Config, resolve  # noqa: E402

__all__ = [
    "Ring", "Poly", "PolyMap", "rat",
    "parse", "parse_ring", "parse_point",
    "Ideal", "Invariant", "invariant_at", "center_from", "reduce_center",
    "Config", "resolve",
    "setup_structured_logging",
]
