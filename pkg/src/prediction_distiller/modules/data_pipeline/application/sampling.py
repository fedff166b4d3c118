# src/prediction_distiller/modules/data_pipeline/application/sampling.py
"""
Muestreo estratificado por clase.

Arquitectura: Application Layer
Responsabilidad: Elegir exactamente n índices por clase, sin repetición,
de forma determinista para un rng dado.
"""

from __future__ import annotations

import numpy as np

from prediction_distiller.core.value_objects import require_non_negative
from prediction_distiller.modules.data_pipeline.domain.exceptions import InsufficientClassError
from prediction_distiller.modules.data_pipeline.domain.value_objects import LabeledDataset


def stratified_indices(
    labels: np.ndarray, num_classes: int, per_class: int, rng: np.random.Generator
) -> np.ndarray:
    """Índices agrupados por clase ascendente: [clase 0 x n, clase 1 x n, ...]."""
    require_non_negative("per_class", per_class)
    labels = np.asarray(labels)
    counts = np.bincount(labels, minlength=num_classes)
    short = [c for c in range(num_classes) if counts[c] < per_class]
    if short:
        raise InsufficientClassError(
            f"Clases con menos de {per_class} miembros: "
            + ", ".join(f"{c} ({counts[c]})" for c in short)
        )

    chosen = [
        rng.choice(np.flatnonzero(labels == c), size=per_class, replace=False)
        for c in range(num_classes)
    ]
    return np.concatenate(chosen).astype(np.int64) if chosen else np.zeros(0, dtype=np.int64)


def stratified_sample(
    dataset: LabeledDataset, per_class: int, rng: np.random.Generator
) -> LabeledDataset:
    indices = stratified_indices(dataset.labels, dataset.num_classes, per_class, rng)
    return dataset.take(indices)
