"""
Disentangling autoencoder: contrastive loss, model, training and checkpoints.
"""
from .autoencoder import DisentangledModel, ObjectiveResult, build, encode, objective, reconstruct
from .checkpoint import load, save
from .contrastive import MultiViewBatch, ScParams, duplicate_batch, sc_loss
from .erasure import class_mean_offsets, erase_ancestry_means
from .training import (
    EpochRecord,
    SearchResult,
    SearchTrial,
    TrainHistory,
    effective_weights,
    ramp_weight,
    search_dae,
    train_dae,
    validation_auc,
)

__all__ = [
    'DisentangledModel',
    'EpochRecord',
    'MultiViewBatch',
    'ObjectiveResult',
    'ScParams',
    'SearchResult',
    'SearchTrial',
    'TrainHistory',
    'build',
    'class_mean_offsets',
    'duplicate_batch',
    'effective_weights',
    'encode',
    'erase_ancestry_means',
    'load',
    'objective',
    'ramp_weight',
    'reconstruct',
    'save',
    'sc_loss',
    'search_dae',
    'train_dae',
    'validation_auc',
]
