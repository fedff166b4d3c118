# src/prediction_distiller/modules/data_pipeline/infrastructure/dataset_loaders.py
"""
Adaptadores de ingesta: IDX (MNIST) y lotes binarios de CIFAR-10.

Arquitectura: Modular Monolith + Vertical Slice
Componente: Infrastructure / Adapters
Responsabilidad: Leer bytes de disco y producir LabeledDataset con píxeles
escalados a [0,1] (byte b -> b/255).
"""

from __future__ import annotations

import gzip
import logging
import struct
from pathlib import Path

import numpy as np

from prediction_distiller.modules.data_pipeline.domain.exceptions import (
    DatasetFormatError,
    DatasetNotFoundError,
)
from prediction_distiller.modules.data_pipeline.domain.value_objects import LabeledDataset

logger = logging.getLogger(__name__)

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801
_GZIP_MAGIC = b"\x1f\x8b"

CIFAR_RECORD = 1 + 3 * 32 * 32
CIFAR_FILES = {
    "train": tuple(f"data_batch_{i}.bin" for i in range(1, 6)),
    "test": ("test_batch.bin",),
}


def _read_bytes(path: Path) -> bytes:
    """Lee el archivo; los .gz se descomprimen de forma transparente."""
    path = Path(path)
    if not path.is_file():
        raise DatasetNotFoundError(f"No existe el archivo de dataset: {path}")
    try:
        data = path.read_bytes()
        if data[:2] == _GZIP_MAGIC:
            data = gzip.decompress(data)
    except (OSError, EOFError) as e:
        raise DatasetFormatError(f"{path}: no se pudo leer: {e}") from e
    return data


def _idx_header(data: bytes, fmt: str, magic: int, path: Path) -> tuple[int, ...]:
    try:
        fields = struct.unpack_from(fmt, data)
    except struct.error as e:
        raise DatasetFormatError(f"{path}: cabecera IDX truncada") from e
    if fields[0] != magic:
        raise DatasetFormatError(f"{path}: magic 0x{fields[0]:08x} != 0x{magic:08x}")
    return fields[1:]


def load_idx(images_path: Path, labels_path: Path, num_classes: int = 10) -> LabeledDataset:
    images_path, labels_path = Path(images_path), Path(labels_path)
    image_bytes = _read_bytes(images_path)
    label_bytes = _read_bytes(labels_path)

    count, rows, cols = _idx_header(image_bytes, ">IIII", IDX_IMAGES_MAGIC, images_path)
    (label_count,) = _idx_header(label_bytes, ">II", IDX_LABELS_MAGIC, labels_path)
    if count != label_count:
        raise DatasetFormatError(
            f"Conteos distintos: {count} imágenes en {images_path}, "
            f"{label_count} etiquetas en {labels_path}"
        )

    pixel_bytes = count * rows * cols
    if len(image_bytes) - 16 < pixel_bytes:
        raise DatasetFormatError(f"{images_path}: payload truncado")
    if len(label_bytes) - 8 < count:
        raise DatasetFormatError(f"{labels_path}: payload truncado")

    pixels = np.frombuffer(image_bytes, dtype=np.uint8, count=pixel_bytes, offset=16)
    labels = np.frombuffer(label_bytes, dtype=np.uint8, count=count, offset=8)
    images = (pixels.astype(np.float32) / 255.0).reshape(count, 1, rows, cols)

    logger.info(f"IDX cargado: {images_path.name} ({count} imágenes {rows}x{cols})")
    return LabeledDataset(images, labels.astype(np.int64), num_classes, tag=images_path.stem)


def load_cifar_binary(directory: Path, split: str = "train") -> LabeledDataset:
    """
    Lee los lotes presentes de `split`. Cada registro: 1 byte de etiqueta y
    3072 bytes de píxeles en orden (C,H,W).
    """
    directory = Path(directory)
    if split not in CIFAR_FILES:
        raise ValueError(f"split debe ser uno de {sorted(CIFAR_FILES)}: {split}")

    expected = CIFAR_FILES[split]
    present = [directory / name for name in expected if (directory / name).is_file()]
    if not present:
        raise DatasetNotFoundError(
            f"{directory}: no hay lotes CIFAR-10 ({split}). Se esperan: {', '.join(expected)}"
        )
    missing = len(expected) - len(present)
    if missing:
        logger.warning(f"CIFAR-10 {split}: faltan {missing} de {len(expected)} lotes")

    records = []
    for path in present:
        data = _read_bytes(path)
        if len(data) % CIFAR_RECORD:
            raise DatasetFormatError(
                f"{path}: longitud {len(data)} no divisible por {CIFAR_RECORD}"
            )
        records.append(np.frombuffer(data, dtype=np.uint8).reshape(-1, CIFAR_RECORD))

    table = np.concatenate(records)
    images = (table[:, 1:].astype(np.float32) / 255.0).reshape(-1, 3, 32, 32)
    return LabeledDataset(images, table[:, 0].astype(np.int64), 10, tag=f"cifar10-{split}")
