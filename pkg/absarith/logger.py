"""
Centralized logging configuration for absarith.
"""

import logging
import sys
import time
from pathlib import Path
from .config import config


def setup_logging(log_level=None, log_file=None):
    """Setup logging: stderr always, a log file when requested"""

    log_config = config['logging']
    files_config = config['files']

    if log_level is None:
        log_level = log_config.LEVEL

    # stdout carries command output, so console logs go to stderr
    handlers = [logging.StreamHandler(sys.stderr)]

    if log_file is not None:
        log_path = Path(log_file)
        if not log_path.is_absolute() and log_path.parent == Path("."):
            log_dir = Path(files_config.LOGS_DIR)
            log_dir.mkdir(exist_ok=True)
            log_path = log_dir / log_path
        handlers.append(logging.FileHandler(log_path, encoding=log_config.ENCODING))

    logging.basicConfig(
        level=log_level,
        format=log_config.FORMAT,
        datefmt=log_config.DATE_FORMAT,
        handlers=handlers,
    )
    logging.getLogger().setLevel(log_level)

    # Set specific module log levels
    logging.getLogger("matplotlib").setLevel(log_config.MATPLOTLIB_LOG_LEVEL)
    logging.getLogger("sympy").setLevel(log_config.SYMPY_LOG_LEVEL)

    logger = logging.getLogger(__name__)
    logger.info("=" * 60)
    logger.info("🚀 absarith starting")
    if log_file is not None:
        logger.info(f"📝 Log file: {log_file}")
    logger.info("=" * 60)

    return logger


def get_logger(name):
    """Get a logger for a specific module"""
    return logging.getLogger(name)


class OperationTimer:
    """Context manager for timing expensive computations"""

    def __init__(self, step_name, logger=None):
        self.step_name = step_name
        self.logger = logger or get_logger(__name__)
        self.start_time = None
        self.duration = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        self.logger.info(f"🔄 Starting: {self.step_name}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration = time.perf_counter() - self.start_time
        if exc_type is None:
            self.logger.info(f"✅ Completed: {self.step_name} ({self.duration:.2f}s)")
        else:
            self.logger.error(f"❌ Failed: {self.step_name} ({self.duration:.2f}s) - {exc_val}")


def log_file_info(file_path, logger=None, prefix="📄"):
    """Log file information in a standardized format"""
    if logger is None:
        logger = get_logger(__name__)

    try:
        path = Path(file_path)
        if path.exists():
            size_kb = path.stat().st_size / 1024
            logger.info(f"{prefix} {path.name} ({size_kb:.1f} KB)")
        else:
            logger.warning(f"{prefix} {path.name} (not found)")
    except Exception as e:
        logger.error(f"{prefix} {file_path} (error: {e})")
