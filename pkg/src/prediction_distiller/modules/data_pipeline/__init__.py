# src/prediction_distiller/modules/data_pipeline/__init__.py
"""
Módulo data-pipeline: ingesta, preprocesado, muestreo estratificado y grillas PNG.
"""

from __future__ import annotations

from .application.preprocessing import (
    DEFAULT_ZCA_EPS,
    Preprocessor,
    normalize_apply,
    normalize_fit,
    normalize_inverse,
    zca_apply,
    zca_fit,
    zca_inverse,
)
from .application.sampling import stratified_indices, stratified_sample
from .application.toy_data import make_blobs
from .domain.exceptions import (
    DataError,
    DatasetFormatError,
    DatasetNotFoundError,
    InsufficientClassError,
    InvalidDatasetError,
    WhiteningError,
)
from .domain.value_objects import (
    ChannelNormalization,
    LabeledDataset,
    PreprocessingStep,
    ZcaTransform,
)
from .infrastructure.dataset_loaders import CIFAR_FILES, load_cifar_binary, load_idx
from .infrastructure.grid_export import export_grid

__all__ = [
    "CIFAR_FILES",
    "DEFAULT_ZCA_EPS",
    "ChannelNormalization",
    "DataError",
    "DatasetFormatError",
    "DatasetNotFoundError",
    "InsufficientClassError",
    "InvalidDatasetError",
    "LabeledDataset",
    "PreprocessingStep",
    "Preprocessor",
    "WhiteningError",
    "ZcaTransform",
    "export_grid",
    "load_cifar_binary",
    "load_idx",
    "make_blobs",
    "normalize_apply",
    "normalize_fit",
    "normalize_inverse",
    "stratified_indices",
    "stratified_sample",
    "zca_apply",
    "zca_fit",
    "zca_inverse",
]
