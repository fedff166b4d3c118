# src/prediction_distiller/modules/data_pipeline/application/preprocessing.py
"""
Preprocesado: blanqueo ZCA y normalización por canal.

Arquitectura: Application Layer
Responsabilidad: Ajustar transformaciones SOLO sobre el split de entrenamiento
y aplicarlas igual a test e imágenes sintéticas.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from prediction_distiller.core.value_objects import require_positive
from prediction_distiller.modules.data_pipeline.domain.exceptions import (
    InvalidDatasetError,
    WhiteningError,
)
from prediction_distiller.modules.data_pipeline.domain.value_objects import (
    ChannelNormalization,
    LabeledDataset,
    PreprocessingStep,
    ZcaTransform,
)
from prediction_distiller.modules.tensor_core import Tensor

logger = logging.getLogger(__name__)

DEFAULT_ZCA_EPS = 0.1


def zca_fit(dataset: LabeledDataset, eps: float = DEFAULT_ZCA_EPS) -> ZcaTransform:
    """
    Covarianza de píxeles en float64 y eigendescomposición simétrica (eigh).
    W = E (Λ + εI)^(-1/2) Eᵀ.
    """
    require_positive("eps", eps)
    if len(dataset) == 0:
        raise InvalidDatasetError("zca_fit requiere un dataset no vacío")

    x = dataset.images.reshape(len(dataset), -1).astype(np.float64)
    if not np.isfinite(x).all():
        raise WhiteningError("Imágenes con valores no finitos: no se puede ajustar ZCA")

    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / x.shape[0]
    try:
        eigvals, eigvecs = linalg.eigh(cov)
    except (linalg.LinAlgError, ValueError) as e:
        raise WhiteningError(f"Falló la eigendescomposición de la covarianza: {e}") from e

    # eigh puede devolver autovalores levemente negativos por redondeo
    eigvals = np.clip(eigvals, 0.0, None)
    whitening = (eigvecs * (1.0 / np.sqrt(eigvals + eps))) @ eigvecs.T
    inverse = (eigvecs * np.sqrt(eigvals + eps)) @ eigvecs.T

    logger.debug(f"ZCA ajustado: dim={mean.size}, eps={eps:g}, autovalor máx={eigvals.max(initial=0.0):.4g}")
    return ZcaTransform(mean=mean, matrix=whitening, inverse=inverse, eps=eps)


def _check_dim(transform: ZcaTransform, images: np.ndarray) -> np.ndarray:
    flat = np.asarray(images, dtype=np.float32).reshape(len(images), -1)
    if flat.shape[1] != transform.dim:
        raise InvalidDatasetError(
            f"Dimensión {flat.shape[1]} incompatible con ZCA de dimensión {transform.dim}"
        )
    return flat


def zca_apply(transform: ZcaTransform, images: Tensor) -> Tensor:
    """Afín: (x - mean) @ W. Conserva la forma (N, C, H, W)."""
    flat = _check_dim(transform, images)
    return ((flat - transform.mean) @ transform.matrix).astype(np.float32).reshape(images.shape)


def zca_inverse(transform: ZcaTransform, images: Tensor) -> Tensor:
    flat = _check_dim(transform, images)
    return (flat @ transform.inverse + transform.mean).astype(np.float32).reshape(images.shape)


def normalize_fit(dataset: LabeledDataset) -> ChannelNormalization:
    if len(dataset) == 0:
        raise InvalidDatasetError("normalize_fit requiere un dataset no vacío")
    images = dataset.images.astype(np.float64)
    mean = images.mean(axis=(0, 2, 3))
    std = images.std(axis=(0, 2, 3))
    # Canal constante: se deja sin escalar
    std = np.where(std > 1e-8, std, 1.0)
    return ChannelNormalization(mean=mean, std=std)


def normalize_apply(norm: ChannelNormalization, images: Tensor) -> Tensor:
    images = np.asarray(images, dtype=np.float32)
    return (images - norm.mean[None, :, None, None]) / norm.std[None, :, None, None]


def normalize_inverse(norm: ChannelNormalization, images: Tensor) -> Tensor:
    images = np.asarray(images, dtype=np.float32)
    return images * norm.std[None, :, None, None] + norm.mean[None, :, None, None]


@dataclass(frozen=True)
class Preprocessor:
    """
    Transformación ajustada sobre train. Con ZCA activo se aplica SOLO ZCA;
    sin ZCA, normalización por canal opcional.
    """

    zca: ZcaTransform | None = None
    normalization: ChannelNormalization | None = None

    @classmethod
    def fit(
        cls,
        train: LabeledDataset,
        use_zca: bool,
        zca_eps: float = DEFAULT_ZCA_EPS,
        normalize: bool = True,
    ) -> Preprocessor:
        if use_zca:
            return cls(zca=zca_fit(train, zca_eps))
        if normalize:
            return cls(normalization=normalize_fit(train))
        return cls()

    @property
    def steps(self) -> tuple[PreprocessingStep, ...]:
        if self.zca is not None:
            return (PreprocessingStep.ZCA,)
        if self.normalization is not None:
            return (PreprocessingStep.NORMALIZED,)
        return ()

    def apply_images(self, images: Tensor) -> Tensor:
        if self.zca is not None:
            return zca_apply(self.zca, images)
        if self.normalization is not None:
            return normalize_apply(self.normalization, images)
        return np.asarray(images, dtype=np.float32)

    def invert_images(self, images: Tensor) -> Tensor:
        """Vuelve al espacio de píxeles [0,1] (para exportar la grilla)."""
        if self.zca is not None:
            return zca_inverse(self.zca, images)
        if self.normalization is not None:
            return normalize_inverse(self.normalization, images)
        return np.asarray(images, dtype=np.float32)

    def apply(self, dataset: LabeledDataset) -> LabeledDataset:
        out = dataset
        images = self.apply_images(dataset.images)
        for step in self.steps:
            out = out.with_images(images, step)
        return out
