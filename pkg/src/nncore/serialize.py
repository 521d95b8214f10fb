"""
Versioned little-endian container for named float64 matrices.

Layout::

    magic        8 bytes
    version      uint32
    dims         3 x uint32   (model-specific, e.g. input/z_d/z_a dims)
    n_arrays     uint32
    per array:   name_len uint16, name utf-8, rows uint32, cols uint32,
                 rows*cols float64 row-major
"""
import struct
from typing import Dict, Tuple

import numpy as np

from errors import CheckpointError, VersionError

_HEADER = struct.Struct("<8sI3II")
_NAME_LEN = struct.Struct("<H")
_SHAPE = struct.Struct("<II")
_FLOAT = np.dtype("<f8")


def pack_arrays(magic: bytes, version: int, dims: Tuple[int, int, int],
                arrays: Dict[str, np.ndarray]) -> bytes:
    if len(magic) != 8:
        raise ValueError("magic must be exactly 8 bytes")
    parts = [_HEADER.pack(magic, version, *dims, len(arrays))]
    for name, value in arrays.items():
        matrix = np.asarray(value, dtype=np.float64)
        if matrix.ndim == 1:
            matrix = matrix.reshape(1, -1)
        encoded = name.encode("utf-8")
        parts.append(_NAME_LEN.pack(len(encoded)))
        parts.append(encoded)
        parts.append(_SHAPE.pack(*matrix.shape))
        parts.append(np.ascontiguousarray(matrix, dtype=_FLOAT).tobytes())
    return b"".join(parts)


def unpack_arrays(data: bytes, magic: bytes, version: int) -> Tuple[Tuple[int, int, int], Dict[str, np.ndarray]]:
    """Parse a container, raising CheckpointError on any truncation or corruption."""
    view = memoryview(data)
    if len(view) < _HEADER.size:
        raise CheckpointError("file is truncated: header incomplete")
    file_magic, file_version, d0, d1, d2, count = _HEADER.unpack_from(view, 0)
    if file_magic != magic:
        raise CheckpointError(f"bad magic {file_magic!r}, expected {magic!r}")
    if file_version != version:
        raise VersionError(f"unsupported format version {file_version}, this build reads version {version}")

    offset = _HEADER.size
    arrays: Dict[str, np.ndarray] = {}
    for _ in range(count):
        if offset + _NAME_LEN.size > len(view):
            raise CheckpointError("file is truncated inside an array record")
        (name_len,) = _NAME_LEN.unpack_from(view, offset)
        offset += _NAME_LEN.size
        if offset + name_len + _SHAPE.size > len(view):
            raise CheckpointError("file is truncated inside an array record")
        try:
            name = bytes(view[offset:offset + name_len]).decode("utf-8")
        except UnicodeDecodeError as e:
            raise CheckpointError(f"corrupt array name: {e}") from e
        offset += name_len
        rows, cols = _SHAPE.unpack_from(view, offset)
        offset += _SHAPE.size
        nbytes = rows * cols * _FLOAT.itemsize
        if offset + nbytes > len(view):
            raise CheckpointError(f"file is truncated inside array {name}")
        if nbytes == 0:
            arrays[name] = np.zeros((rows, cols))
        else:
            arrays[name] = np.frombuffer(view, dtype=_FLOAT, count=rows * cols, offset=offset).reshape(rows, cols).astype(np.float64)
        offset += nbytes
    if offset != len(view):
        raise CheckpointError(f"{len(view) - offset} trailing bytes after the last array")
    return (d0, d1, d2), arrays
