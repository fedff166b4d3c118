# src/prediction_distiller/modules/data_pipeline/application/toy_data.py
"""
Dataset sintético de "blobs": un prototipo por clase más ruido gaussiano.

Arquitectura: Application Layer
Responsabilidad: Datos deterministas y baratos para tests y para el tipo de
dataset `blobs` de la CLI.
"""

from __future__ import annotations

import numpy as np

from prediction_distiller.core.value_objects import require_positive
from prediction_distiller.modules.data_pipeline.domain.value_objects import LabeledDataset

_SPLITS = {"train": 0, "test": 1}


def make_blobs(
    num_classes: int = 10,
    per_class: int = 50,
    image_shape: tuple[int, int, int] = (1, 8, 8),
    seed: int = 0,
    noise: float = 0.15,
    split: str = "train",
) -> LabeledDataset:
    """
    Los prototipos dependen solo de `seed`, de modo que train y test comparten
    clases. Las muestras dependen de (seed, split). Píxeles recortados a [0,1].
    """
    require_positive("num_classes", num_classes)
    require_positive("per_class", per_class)
    if split not in _SPLITS:
        raise ValueError(f"split debe ser uno de {sorted(_SPLITS)}: {split}")

    prototypes = np.random.default_rng(seed).uniform(0.0, 1.0, size=(num_classes, *image_shape))
    rng = np.random.default_rng((seed, _SPLITS[split]))

    labels = np.repeat(np.arange(num_classes), per_class)
    images = prototypes[labels] + noise * rng.standard_normal((labels.size, *image_shape))
    order = rng.permutation(labels.size)
    return LabeledDataset(
        images=np.clip(images[order], 0.0, 1.0).astype(np.float32),
        labels=labels[order],
        num_classes=num_classes,
        tag=f"blobs-{seed}-{split}",
    )
