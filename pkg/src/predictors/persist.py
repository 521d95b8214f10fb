"""
Saving and loading fitted predictors.

Networks use the binary array container shared with autoencoder
checkpoints; linear models and ensemble weights are YAML records; PRS
models are their weight table.
"""
import logging
from pathlib import Path
from typing import Dict, Union

import numpy as np
import yaml

from errors import CheckpointError, DimensionError
from nncore import MLP, AffineLayer, pack_arrays, unpack_arrays
from utils import atomic_write_bytes
from .adversarial import AdvModel
from .ensemble import weights_from_record
from .linear import linear_model_from_record
from .network import NNModel
from .prs import PrsModel, load_prs_weights

logger = logging.getLogger(__name__)

NN_MAGIC = b"DISPRDNN"
ADV_MAGIC = b"DISPRADV"
AUTOENCODER_MAGIC = b"DISPRDAE"
FORMAT_VERSION = 1

_IDENTITY_LAYERS = {"nn": {"fc5"}, "backbone": set(), "head": {"fc3"}, "critic": {"fc2"}}


def _mlp_from_arrays(arrays: Dict[str, np.ndarray], prefix: str, kind: str) -> MLP:
    """Rebuild an MLP from ``<prefix><layer>.W`` / ``.b`` arrays in stored order."""
    layers = {}
    for key in arrays:
        if key.startswith(prefix) and key.endswith(".W"):
            name = key[len(prefix):-2]
            activation = "identity" if name in _IDENTITY_LAYERS[kind] else "relu"
            try:
                layers[name] = AffineLayer(arrays[key], arrays[f"{prefix}{name}.b"], activation)
            except KeyError as e:
                raise CheckpointError(f"layer {prefix}{name} has no bias") from e
            except DimensionError as e:
                raise CheckpointError(f"layer {prefix}{name}: {e}") from e
    if not layers:
        raise CheckpointError(f"no layers stored under {prefix!r}")
    previous = None
    for name, layer in layers.items():
        if previous is not None and layer.in_dim != previous:
            raise CheckpointError(f"layer {prefix}{name} does not chain: {layer.in_dim} inputs after {previous}")
        previous = layer.out_dim
    return MLP(layers)


def _prefixed(prefix: str, params: Dict[str, np.ndarray]) -> Dict[str, np.ndarray]:
    return {f"{prefix}{k}": v for k, v in params.items()}


def save_network(model: Union[NNModel, AdvModel], path: Union[str, Path]) -> Path:
    if isinstance(model, NNModel):
        data = pack_arrays(NN_MAGIC, FORMAT_VERSION, (model.n_features, 0, 0), model.network.parameters())
    elif isinstance(model, AdvModel):
        arrays: Dict[str, np.ndarray] = {}
        if model.reference is not None:
            arrays[f"reference.{model.reference}"] = np.zeros((0, 0))
        arrays.update(_prefixed("backbone.", model.backbone.parameters()))
        arrays.update({"head.fc3.W": model.head.W, "head.fc3.b": model.head.b})
        for name, critic in model.critics.items():
            arrays.update(_prefixed(f"critic.{name}.", critic.parameters()))
        data = pack_arrays(ADV_MAGIC, FORMAT_VERSION, (model.n_features, len(model.critics), 0), arrays)
    else:
        raise TypeError(f"cannot save {type(model).__name__} as a network")
    target = atomic_write_bytes(path, data)
    logger.info(f"Saved {type(model).__name__} to {target}")
    return target


def _load_adv(dims, arrays: Dict[str, np.ndarray]) -> AdvModel:
    references = [k[len("reference."):] for k in arrays if k.startswith("reference.")]
    critic_names = sorted({k.split(".")[1] for k in arrays if k.startswith("critic.")})
    model = AdvModel(
        backbone=_mlp_from_arrays(arrays, "backbone.", "backbone"),
        head=_mlp_from_arrays(arrays, "head.", "head").layers["fc3"],
        critics={name: _mlp_from_arrays(arrays, f"critic.{name}.", "critic") for name in critic_names},
        reference=references[0] if references else None,
    )
    if model.n_features != dims[0] or len(model.critics) != dims[1]:
        raise CheckpointError(f"header dims {tuple(dims)} disagree with stored layers")
    return model


def load_network(path: Union[str, Path]) -> Union[NNModel, AdvModel]:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read model {path}: {e}") from e
    magic = data[:8]
    if magic == NN_MAGIC:
        dims, arrays = unpack_arrays(data, NN_MAGIC, FORMAT_VERSION)
        model = NNModel(network=_mlp_from_arrays(arrays, "", "nn"))
        if model.n_features != dims[0]:
            raise CheckpointError(f"header input dim {dims[0]} disagrees with stored layers")
        return model
    if magic == ADV_MAGIC:
        return _load_adv(*unpack_arrays(data, ADV_MAGIC, FORMAT_VERSION))
    raise CheckpointError(f"{path} is not a network model file")


def load_model(path: Union[str, Path]):
    """
    Load any fitted predictor or ensemble weights written by this package.

    Returns a ``LinearModel``, ``NNModel``, ``AdvModel``, ``PrsModel`` or
    ``EnsembleWeights`` depending on the file's content.
    """
    path = Path(path)
    try:
        head = path.read_bytes()[:8]
    except OSError as e:
        raise CheckpointError(f"cannot read model {path}: {e}") from e
    if head in (NN_MAGIC, ADV_MAGIC):
        return load_network(path)
    if head == AUTOENCODER_MAGIC:
        raise CheckpointError(f"{path} is an autoencoder checkpoint, not a predictor; pass it as the encoder")
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise CheckpointError(f"{path}: unrecognised model file") from e
    if text.startswith("variant_id"):
        return PrsModel(load_prs_weights(path))
    try:
        record = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise CheckpointError(f"{path}: unrecognised model file: {e}") from e
    if isinstance(record, dict) and record.get("kind") in ("linear", "lasso"):
        return linear_model_from_record(record)
    if isinstance(record, dict) and {"alpha", "beta", "mode"} <= set(record):
        return weights_from_record(record)
    raise CheckpointError(f"{path}: unrecognised model file")
