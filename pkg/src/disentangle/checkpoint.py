"""
Autoencoder checkpoint files.
"""
import logging
from pathlib import Path
from typing import Union

from errors import CheckpointError
from nncore import pack_arrays, unpack_arrays
from utils import atomic_write_bytes
from .autoencoder import DisentangledModel

logger = logging.getLogger(__name__)

MAGIC = b"DISPRDAE"
FORMAT_VERSION = 1


def save(model: DisentangledModel, path: Union[str, Path]) -> Path:
    """Write the model atomically; the header records (input_dim, z_d_dim, z_a_dim)."""
    data = pack_arrays(MAGIC, FORMAT_VERSION, model.dims, model.parameters())
    target = atomic_write_bytes(path, data)
    logger.info(f"Saved autoencoder {model.dims} to {target}")
    return target


def load(path: Union[str, Path]) -> DisentangledModel:
    """
    Read a checkpoint written by ``save``.

    Raises:
        CheckpointError: missing, truncated or inconsistent file
        VersionError: unsupported format version
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e
    dims, arrays = unpack_arrays(data, MAGIC, FORMAT_VERSION)
    model = DisentangledModel.from_parameters(arrays)
    if model.dims != tuple(dims):
        raise CheckpointError(f"{path}: header dims {tuple(dims)} disagree with layer shapes {model.dims}")
    logger.debug(f"Loaded autoencoder {model.dims} from {path}")
    return model
