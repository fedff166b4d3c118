# src/prediction_distiller/modules/apm_distiller/domain/distances.py
"""
Distancias entre vectores de logits (versión numpy, sin grafo).

Arquitectura: Domain Layer
Responsabilidad: Misma semántica que los primitivos L1/L2/coseno del
tensor-core; se usa para métricas, sondas y acuerdo de predicciones.
"""

from __future__ import annotations

import numpy as np

from prediction_distiller.modules.tensor_core import ShapeMismatchError

from .exceptions import UnknownMetricError
from .value_objects import Metric


def row_distances(metric: Metric | str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distancia por fila sobre el último eje. Un vector 1-D da un escalar 0-D."""
    try:
        metric = Metric(metric)
    except ValueError as e:
        raise UnknownMetricError(f"Métrica desconocida: {metric}") from e
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"Longitudes distintas: {a.shape} vs {b.shape}")

    diff = a - b
    if metric is Metric.MANHATTAN:
        return np.abs(diff).sum(axis=-1)
    if metric is Metric.EUCLIDEAN:
        return np.sqrt((diff * diff).sum(axis=-1))

    na = np.linalg.norm(a, axis=-1)
    nb = np.linalg.norm(b, axis=-1)
    valid = (na > 0) & (nb > 0)
    sim = np.where(valid, (a * b).sum(axis=-1) / np.where(valid, na * nb, 1.0), 0.0)
    # Ambos nulos -> 0; exactamente uno nulo -> 1
    guarded = np.where((na == 0) & (nb == 0), 0.0, 1.0)
    return np.maximum(np.where(valid, 1.0 - sim, guarded), 0.0)


def distance(metric: Metric | str, a: np.ndarray, b: np.ndarray) -> float:
    a, b = np.asarray(a), np.asarray(b)
    if a.ndim != 1 or b.ndim != 1:
        raise ShapeMismatchError(f"distance espera vectores 1-D: {a.shape}, {b.shape}")
    return float(row_distances(metric, a, b))
