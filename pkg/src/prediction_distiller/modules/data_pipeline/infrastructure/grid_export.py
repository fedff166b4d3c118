# src/prediction_distiller/modules/data_pipeline/infrastructure/grid_export.py
"""
Exportación de imágenes como grilla PNG.

Arquitectura: Infrastructure / Adapters
Responsabilidad: Una fila por clase (orden row-major), cada imagen escalada
min-max de forma independiente. Imagen constante -> gris uniforme.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from PIL import Image

from prediction_distiller.modules.data_pipeline.domain.exceptions import DatasetFormatError

GRAY = 0.5


def _scale_per_image(images: np.ndarray) -> np.ndarray:
    flat = images.reshape(len(images), -1).astype(np.float64)
    lo = flat.min(axis=1, keepdims=True)
    span = flat.max(axis=1, keepdims=True) - lo
    scaled = np.where(span > 0, (flat - lo) / np.where(span > 0, span, 1.0), GRAY)
    return scaled.reshape(images.shape)


def _layout(labels: np.ndarray | None, count: int) -> list[list[int]]:
    if labels is None:
        cols = max(1, math.ceil(math.sqrt(count)))
        return [list(range(r, min(r + cols, count))) for r in range(0, count, cols)]
    return [np.flatnonzero(labels == c).tolist() for c in np.unique(labels)]


def export_grid(images: np.ndarray, path: Path, labels: np.ndarray | None = None) -> Path:
    """Escribe un único PNG de tiles (H, W) sin separación."""
    images = np.asarray(images)
    if images.ndim != 4 or len(images) == 0 or images.shape[1] not in (1, 3):
        raise DatasetFormatError(f"export_grid espera (N,1|3,H,W) no vacío, forma {images.shape}")

    n, channels, h, w = images.shape
    rows = _layout(None if labels is None else np.asarray(labels), n)
    cols = max(len(r) for r in rows)

    scaled = _scale_per_image(images)
    canvas = np.zeros((len(rows) * h, cols * w, channels), dtype=np.float64)
    for r, members in enumerate(rows):
        for c, index in enumerate(members):
            canvas[r * h : (r + 1) * h, c * w : (c + 1) * w] = scaled[index].transpose(1, 2, 0)

    pixels = np.round(canvas * 255).astype(np.uint8)
    image = Image.fromarray(pixels[:, :, 0] if channels == 1 else pixels)

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    image.save(path, format="PNG")
    return path
