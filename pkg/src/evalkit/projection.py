"""
Two-dimensional PCA projection of latent representations.
"""
from pathlib import Path
from typing import Sequence, Union

import numpy as np
import pandas as pd
from sklearn.decomposition import PCA

from errors import DimensionError, ParameterError
from nncore import as_matrix
from utils import atomic_write_text


def pca2(Z) -> np.ndarray:
    """
    Project mean-centred rows onto the top two principal directions.

    Each direction's largest-magnitude loading is made positive. Inputs with
    a single column get a zero second coordinate; zero-variance inputs map to 0.
    """
    Z = as_matrix(Z, "latent matrix")
    if Z.shape[0] < 2:
        raise ParameterError(f"pca2 needs at least 2 rows, got {Z.shape[0]}")
    n_components = min(2, Z.shape[1])
    pca = PCA(n_components=n_components, svd_solver="full").fit(Z)
    components = pca.components_.copy()
    flip = components[np.arange(n_components), np.argmax(np.abs(components), axis=1)] < 0
    components[flip] *= -1.0
    coords = np.zeros((Z.shape[0], 2))
    coords[:, :n_components] = (Z - pca.mean_) @ components.T
    return coords


def embeddings_frame(sample_ids: Sequence[str], z_a, z_d, ancestry=None) -> pd.DataFrame:
    z_a = as_matrix(z_a, "z_a")
    z_d = as_matrix(z_d, "z_d")
    n = len(sample_ids)
    if z_a.shape[0] != n or z_d.shape[0] != n:
        raise DimensionError(f"latents have {z_a.shape[0]}/{z_d.shape[0]} rows for {n} samples")
    columns = {"sample_id": list(sample_ids)}
    columns.update({f"z_a_{k + 1}": z_a[:, k] for k in range(z_a.shape[1])})
    columns.update({f"z_d_{k + 1}": z_d[:, k] for k in range(z_d.shape[1])})
    pca_a = pca2(z_a)
    pca_d = pca2(z_d)
    columns.update({"pca_a_1": pca_a[:, 0], "pca_a_2": pca_a[:, 1],
                    "pca_d_1": pca_d[:, 0], "pca_d_2": pca_d[:, 1]})
    columns["ancestry_label"] = ["NA"] * n if ancestry is None else [str(a) for a in ancestry]
    return pd.DataFrame(columns)


def write_embeddings(path: Union[str, Path], sample_ids: Sequence[str], z_a, z_d, ancestry=None) -> Path:
    frame = embeddings_frame(sample_ids, z_a, z_d, ancestry)
    return atomic_write_text(path, frame.to_csv(sep="\t", index=False, float_format="%.10g", lineterminator="\n"))
