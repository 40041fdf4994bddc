# wres/config.py
import os

from dotenv import load_dotenv

BASE_DIR = os.path.abspath(os.path.dirname(__file__))

if os.getenv("SKIP_LOAD_DOTENV") != "1":
    load_dotenv(os.path.join(BASE_DIR, "..", ".env"))

ENV = os.getenv('WRES_ENV', 'development').lower()


class ConfigError(Exception):
    """Raised when an env var holds an unusable value."""
    pass


def _optional_int(name):
    raw = os.getenv(name)
    return int(raw) if raw not in (None, "") else None


class BaseConfig:
    # -----------------------
    # Resolution driver
    # -----------------------
    MAX_STEPS   = int(os.getenv("WRES_MAX_STEPS", 64))
    ROOT_FACTOR = int(os.getenv("WRES_ROOT_FACTOR", 1))
    # None = exact mode; the driver falls back to jets on its own
    TRUNCATION  = _optional_int("WRES_TRUNCATE")
    SEED        = _optional_int("WRES_SEED")
    PROBE_RANGE = int(os.getenv("WRES_PROBE_RANGE", 1))
    WORKERS     = int(os.getenv("WRES_WORKERS", 4))

    # -----------------------
    # Groebner guard
    # -----------------------
    GB_MAX_BASIS  = int(os.getenv("WRES_GB_MAX_BASIS", 400))
    GB_MAX_DEGREE = int(os.getenv("WRES_GB_MAX_DEGREE", 60))

    # -----------------------
    # Ideal calculus
    # -----------------------
    MAX_GENERATORS       = int(os.getenv("WRES_MAX_GENERATORS", 4000))
    PRUNE_DIVISION_LIMIT = int(os.getenv("WRES_PRUNE_DIVISION_LIMIT", 40))
    JET_RETRY_BOUND      = int(os.getenv("WRES_JET_RETRY_BOUND", 24))

    LOG_LEVEL = os.getenv("WRES_LOG_LEVEL", "WARNING").upper()

    # -----------------------
    # Feature flags
    # -----------------------
    FEATURE_FLAGS = {
        'assert_descent':    os.getenv('FLAG_ASSERT_DESCENT', 'true').lower() == 'true',
        'concurrent_charts': os.getenv('FLAG_CONCURRENT_CHARTS', 'true').lower() == 'true',
        'local_contact_simplification':
            os.getenv('FLAG_LOCAL_CONTACT', 'true').lower() == 'true',
    }


class DevelopmentConfig(BaseConfig):
    DEBUG = True


class ProductionConfig(BaseConfig):
    DEBUG = False
    if BaseConfig.MAX_STEPS < 1:
        raise ConfigError("WRES_MAX_STEPS must be at least 1")


class TestingConfig(BaseConfig):
    TESTING = True
    DEBUG = False
    # sequential charts keep log order stable
    FEATURE_FLAGS = dict(BaseConfig.FEATURE_FLAGS, concurrent_charts=False)


def get_config():
    if ENV == 'production':
        return ProductionConfig
    if ENV == 'testing':
        return TestingConfig
    return DevelopmentConfig


settings = get_config()
