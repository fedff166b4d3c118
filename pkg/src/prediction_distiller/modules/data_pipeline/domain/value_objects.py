# src/prediction_distiller/modules/data_pipeline/domain/value_objects.py
"""
Value Objects de Datos: LabeledDataset y transformaciones ajustadas.

Arquitectura: Modular Monolith
Capa: Domain
Responsabilidad: Datasets etiquetados inmutables y los parámetros de
preprocesado (normalización por canal, ZCA) ajustados sobre train.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from prediction_distiller.modules.tensor_core import Tensor, frozen_tensor

from .exceptions import InvalidDatasetError


class PreprocessingStep(StrEnum):
    NORMALIZED = "normalized"
    ZCA = "zca"


@dataclass(frozen=True)
class LabeledDataset:
    """
    Imágenes (N, C, H, W) float32 y etiquetas enteras.

    Invariantes:
    1. Toda etiqueta en [0, num_classes)
    2. len(images) == len(labels)
    3. `preprocessing` registra las transformaciones aplicadas, en orden
       (tupla vacía = raw)
    """

    images: Tensor
    labels: np.ndarray
    num_classes: int
    preprocessing: tuple[PreprocessingStep, ...] = ()
    tag: str = ""

    def __post_init__(self) -> None:
        images = frozen_tensor(self.images)
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        labels.flags.writeable = False
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(
            self, "preprocessing", tuple(PreprocessingStep(s) for s in self.preprocessing)
        )

        if images.ndim != 4:
            raise InvalidDatasetError(f"Se esperan imágenes (N,C,H,W), forma {images.shape}")
        if labels.ndim != 1 or labels.shape[0] != images.shape[0]:
            raise InvalidDatasetError(
                f"Conteos distintos: {images.shape[0]} imágenes, {labels.shape} etiquetas"
            )
        if self.num_classes < 1:
            raise InvalidDatasetError(f"num_classes inválido: {self.num_classes}")
        if labels.size and (labels.min() < 0 or labels.max() >= self.num_classes):
            raise InvalidDatasetError(
                f"Etiquetas fuera de [0, {self.num_classes}): "
                f"min={labels.min()}, max={labels.max()}"
            )

    def __len__(self) -> int:
        return int(self.images.shape[0])

    @property
    def image_shape(self) -> tuple[int, int, int]:
        c, h, w = self.images.shape[1:]
        return int(c), int(h), int(w)

    @property
    def preprocessing_tag(self) -> str:
        """"raw" o los pasos unidos por '+', p.ej. "normalized+zca"."""
        return "+".join(self.preprocessing) if self.preprocessing else "raw"

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_classes)

    def take(self, indices: np.ndarray) -> LabeledDataset:
        indices = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(
            self.images[indices], self.labels[indices], self.num_classes, self.preprocessing, self.tag
        )

    def with_images(self, images: Tensor, step: PreprocessingStep) -> LabeledDataset:
        return LabeledDataset(
            images, self.labels, self.num_classes, (*self.preprocessing, step), self.tag
        )


@dataclass(frozen=True)
class ZcaTransform:
    """
    x_w = (x - mean) @ W, con W = E (Λ + εI)^(-1/2) Eᵀ sobre píxeles aplanados.
    W es simétrica; `inverse` = E (Λ + εI)^(1/2) Eᵀ.
    """

    mean: Tensor
    matrix: Tensor
    inverse: Tensor
    eps: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean", frozen_tensor(self.mean))
        object.__setattr__(self, "matrix", frozen_tensor(self.matrix))
        object.__setattr__(self, "inverse", frozen_tensor(self.inverse))

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])


@dataclass(frozen=True)
class ChannelNormalization:
    """Media y desviación por canal, de forma (C,)."""

    mean: Tensor
    std: Tensor

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean", frozen_tensor(self.mean))
        object.__setattr__(self, "std", frozen_tensor(self.std))
