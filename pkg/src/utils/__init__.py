"""
Utility package for file operations.
"""
from .file_utils import atomic_write_bytes, atomic_write_text, cleanup_file, ensure_directory

__all__ = [
    'atomic_write_bytes',
    'atomic_write_text',
    'cleanup_file',
    'ensure_directory',
]
