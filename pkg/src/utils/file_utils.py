"""
Utility functions for file I/O operations.
"""
import logging
import os
import tempfile
from pathlib import Path
from typing import Union

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def ensure_directory(directory: PathLike) -> Path:
    """
    Create a directory (and parents) if it does not exist.

    Args:
        directory: Path to the directory

    Returns:
        The directory as a Path

    Raises:
        OSError: If the directory cannot be created
    """
    path = Path(directory)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logger.error(f"Failed to create directory {path}: {e}", exc_info=True)
        raise
    return path


def atomic_write_bytes(filepath: PathLike, data: bytes) -> Path:
    """
    Save binary data to a file atomically.

    The data is written to a temporary file in the destination directory and
    renamed over the target, so readers never observe a partial file.

    Args:
        data: Binary data to save
        filepath: Path where the file should be saved

    Returns:
        Path to the saved file

    Raises:
        OSError: If file cannot be written
    """
    target = Path(filepath)
    ensure_directory(target.parent)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, target)
        logger.debug(f"Successfully saved {len(data)} bytes to {target}")
        return target
    except OSError as e:
        logger.error(f"Failed to save file to {target}: {e}", exc_info=True)
        cleanup_file(tmp_name)
        raise


def atomic_write_text(filepath: PathLike, text: str) -> Path:
    """Save UTF-8 text atomically (see atomic_write_bytes)."""
    return atomic_write_bytes(filepath, text.encode("utf-8"))


def cleanup_file(filepath: PathLike) -> None:
    """
    Delete a file if it exists.

    Args:
        filepath: Path to the file to delete

    Raises:
        OSError: If file cannot be deleted
    """
    try:
        if os.path.exists(filepath):
            os.remove(filepath)
            logger.debug(f"Successfully deleted {filepath}")
    except OSError as e:
        logger.error(f"Failed to delete file {filepath}: {e}", exc_info=True)
        raise
