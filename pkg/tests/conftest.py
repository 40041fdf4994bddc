import os, sys

# ─── FORCE TEST ENVIRONMENT ────────────────────────────────────────────────────
# NOTE: these must come before any 'import wres' so that wres.config sees them.
os.environ["SKIP_LOAD_DOTENV"] = "1"
os.environ["WRES_ENV"]         = "testing"
os.environ["WRES_LOG_LEVEL"]   = "WARNING"
# ───────────────────────────────────────────────────────────────────────────────

# Ensure "import wres" picks up the project package
root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if root not in sys.path:
    sys.path.insert(0, root)

import pytest

from wres.config import settings as _settings
from wres.localideal import Ideal
from wres.parser import parse, parse_ring
from wres.resolve import Config


def ideal(text, ring_text):
    ring = parse_ring(ring_text)
    return Ideal(ring, tuple(parse(g, ring) for g in text.split(",")))


@pytest.fixture(scope="session")
def settings():
    """TestingConfig: sequential charts, default guards."""
    return _settings


@pytest.fixture(scope="session")
def xy():
    return parse_ring("x,y")


@pytest.fixture(scope="session")
def golden():
    """The worked examples, keyed by a short name."""
    return {
        "cusp8": ideal("x^5+x^3*y^3+y^8", "x,y"),
        "cusp9": ideal("x^5+x^3*y^3+y^9", "x,y"),
        "cusp7": ideal("x^5+x^3*y^3+y^7", "x,y"),
        "whitney": ideal("x^2-y1*y2*y3", "x,y1,y2,y3"),
        "surface": ideal("x^2*y*z+y*z^4", "x,y,z"),
        "plane_cusp": ideal("x^2+y^3", "x,y"),
    }


@pytest.fixture(scope="session")
def cfg(settings):
    return Config.from_settings(settings, mode="embed", concurrent=False)
