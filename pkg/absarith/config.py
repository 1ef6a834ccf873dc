"""
Configuration settings for absarith.
"""

import logging
import os
from pathlib import Path


def _env_flag(name, default=False):
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


class ArithConfig:
    """Configuration for factorization and shared number theory"""

    # Trial division runs up to this bound before Pollard rho takes over
    TRIAL_DIVISION_LIMIT = 10**6

    # Public factorize() rejects inputs at or above this magnitude
    MAX_FACTOR_INPUT = 2**64

    # Pollard rho effort budget
    RHO_RETRIES = 5
    RHO_MAX_STEPS = int(os.getenv("ABSARITH_FACTOR_BUDGET", "200000"))
    RHO_SEED = 1234


class SmirnovConfig:
    """Configuration for Smirnov cover reports"""

    # Significant digits for float-valued defect output
    FLOAT_DIGITS = 17


class HabiroConfig:
    """Configuration for Habiro ring evaluation and the radial check"""

    ZAGIER_RELATIVE_TOL = 1e-16
    ZAGIER_MAX_TERMS = 1_000_000
    RADII = (0.9, 0.99, 0.999)


class WittConfig:
    """Configuration for Witt vector arithmetic"""

    # Largest precision for which F_p multiplication polynomials are built
    MAX_UNIVERSAL_PRECISION = 16

    # Bump when the on-disk polynomial format changes
    CACHE_VERSION = 1
    CACHE_PREFIX = "witt_mul"


class BigPictureConfig:
    """Configuration for lattice enumeration"""

    BALL_LIMIT = int(os.getenv("ABSARITH_BALL_LIMIT", "50000"))
    TREE_MAX_DEPTH = 8


class NimberConfig:
    """Configuration for nimber arithmetic"""

    # mex oracle runs on operands below 2**ORACLE_BITS
    ORACLE_BITS = 8

    # Base multiplication table covers operands below 2**TABLE_BITS
    TABLE_BITS = 8

    # Largest tower level searched without the long-search flag
    MAX_SEARCH_LEVEL = 4
    LONG_SEARCH = _env_flag("ABSARITH_LONG_SEARCH")
    MAX_LEVEL = 6

    # Generators known in advance; level 6 is documented, never searched
    KNOWN_GENERATORS = {
        1: 2,
        2: 4,
        3: 32,
        4: 1051,
        5: 1361923,
        6: 1127700028470,
    }

    CACHE_NAME = "nimber_tower"


class PlotConfig:
    """Configuration for SVG figures"""

    WIDTH = 800
    HEIGHT = 600
    POINTS_PER_INCH = 72

    HASH_SALT = "absarith"
    FONT_SIZE = 9
    MARKER_SIZE = 9

    ZERO_COLOR = "#2980b9"
    INFINITY_COLOR = "#c0392b"
    FINITE_COLOR = "#2c3e50"

    # Edge colours in the adjacency wheel, keyed by prime
    EDGE_COLORS = {
        2: "#3498db",  # Blue
        3: "#2ecc71",  # Green
        5: "#f1c40f",  # Yellow
        7: "#9b59b6",  # Purple
    }
    DEFAULT_EDGE_COLOR = "#7f8c8d"


class CliConfig:
    """Defaults for the command-line surface"""

    # Prime bound for scans and the membership listing of open sets
    DEFAULT_BOUND = 1000

    # Witt and Burnside precision when no coefficients fix it
    DEFAULT_PRECISION = 8

    JSON_SEPARATORS = (",", ":")
    CSV_LINE_TERMINATOR = "\n"


class FileConfig:
    """Configuration for file management"""

    CACHE_ENV = "ABSARITH_CACHE_DIR"
    DEFAULT_CACHE_DIR = Path.home() / ".cache" / "absarith"
    LOGS_DIR = "logs"
    TABLES_DIR = Path(__file__).resolve().parent / "tables"


class LogConfig:
    """Configuration for logging"""

    LEVEL = getattr(logging, os.getenv("ABSARITH_LOG_LEVEL", "WARNING").upper(), logging.WARNING)
    FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

    # Module-specific log levels
    MATPLOTLIB_LOG_LEVEL = logging.WARNING
    SYMPY_LOG_LEVEL = logging.WARNING

    # File settings
    ENCODING = "utf-8"


# Global configuration instance
config = {
    'arith': ArithConfig(),
    'smirnov': SmirnovConfig(),
    'habiro': HabiroConfig(),
    'witt': WittConfig(),
    'bigpicture': BigPictureConfig(),
    'nimber': NimberConfig(),
    'plot': PlotConfig(),
    'cli': CliConfig(),
    'files': FileConfig(),
    'logging': LogConfig(),
}
