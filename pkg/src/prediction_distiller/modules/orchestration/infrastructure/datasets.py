# src/prediction_distiller/modules/orchestration/infrastructure/datasets.py
"""
Resolución de la sección [dataset] a pares (train, test).

Arquitectura: Infrastructure / Adapters
"""

from __future__ import annotations

import logging
from pathlib import Path

from prediction_distiller.modules.data_pipeline import (
    LabeledDataset,
    load_cifar_binary,
    load_idx,
    make_blobs,
)
from prediction_distiller.modules.orchestration.domain.value_objects import (
    DatasetConfig,
    DatasetKind,
)

logger = logging.getLogger(__name__)


def _resolve(base: str, name: str) -> Path:
    path = Path(name)
    return path if path.is_absolute() or not base else Path(base) / path


def load_datasets(cfg: DatasetConfig) -> tuple[LabeledDataset, LabeledDataset]:
    """Las rutas IDX relativas se resuelven contra `path` si está definido."""
    if cfg.kind is DatasetKind.IDX:
        train = load_idx(_resolve(cfg.path, cfg.train_images), _resolve(cfg.path, cfg.train_labels), cfg.num_classes)
        test = load_idx(_resolve(cfg.path, cfg.test_images), _resolve(cfg.path, cfg.test_labels), cfg.num_classes)
    elif cfg.kind is DatasetKind.CIFAR:
        train = load_cifar_binary(Path(cfg.path), "train")
        test = load_cifar_binary(Path(cfg.path), "test")
    else:
        shape = tuple(cfg.image_shape)
        train = make_blobs(cfg.num_classes, cfg.per_class, shape, cfg.seed, cfg.noise, "train")  # type: ignore[arg-type]
        test = make_blobs(cfg.num_classes, cfg.test_per_class, shape, cfg.seed, cfg.noise, "test")  # type: ignore[arg-type]

    logger.info(f"Dataset {cfg.kind}: train={len(train)} test={len(test)} imagen={train.image_shape}")
    return train, test
