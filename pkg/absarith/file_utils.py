"""
Cache directory handling, JSON cache files and command output.
"""

import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Optional

from .config import config
from .logger import log_file_info

logger = logging.getLogger(__name__)


def get_cache_dir() -> Path:
    """Resolve the cache directory, honouring ABSARITH_CACHE_DIR"""
    files_config = config['files']
    override = os.getenv(files_config.CACHE_ENV)
    cache_dir = Path(override) if override else files_config.DEFAULT_CACHE_DIR

    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
    except Exception as e:
        logger.error(f"Failed to create cache directory {cache_dir}: {e}")
        raise

    return cache_dir


def load_json_cache(name: str, version: int) -> Optional[Any]:
    """Load a cached payload; any problem counts as a miss"""
    path = get_cache_dir() / f"{name}.json"
    if not path.exists():
        return None

    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except Exception as e:
        logger.error(f"Failed to load cache {path}: {e}")
        return None

    if data.get("version") != version:
        logger.info(f"Ignoring cache {path.name}: version {data.get('version')} != {version}")
        return None

    logger.debug(f"Loaded cache {path.name}")
    return data.get("payload")


def save_json_cache(name: str, version: int, payload: Any) -> Optional[Path]:
    """Write a versioned cache file atomically"""
    path = get_cache_dir() / f"{name}.json"
    tmp_path = path.with_name(f"{path.name}.{os.getpid()}.tmp")

    try:
        with open(tmp_path, "w", encoding="utf-8") as f:
            json.dump({"version": version, "payload": payload}, f)
        os.replace(tmp_path, path)
        log_file_info(path, logger, "💾")
        return path
    except Exception as e:
        logger.error(f"Failed to save cache {path}: {e}")
        if tmp_path.exists():
            tmp_path.unlink()
        return None


def write_output(text: str, out: Optional[str] = None) -> None:
    """Write command output to a file or to stdout"""
    if not text.endswith("\n"):
        text += "\n"

    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    path = Path(out)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        log_file_info(path, logger, "📄")
    except Exception as e:
        logger.error(f"Failed to write output {path}: {e}")
        raise
