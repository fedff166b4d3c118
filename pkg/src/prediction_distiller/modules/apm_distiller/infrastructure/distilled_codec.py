# src/prediction_distiller/modules/apm_distiller/infrastructure/distilled_codec.py
"""
Códec APMS del conjunto destilado.

Arquitectura: Infrastructure / Adapters
Responsabilidad: Persistir un SyntheticSet bit a bit:
    "APMS" | u16 versión=1 | u32 largo cabecera | cabecera JSON
    (|S|, C, forma, ipc, procedencia, has_logits, crc32, config_hash)
    | u float32 LE | y u32 LE | v float32 LE (si existe)
"""

from __future__ import annotations

import zlib
from pathlib import Path

import numpy as np

from prediction_distiller.infrastructure.binary_container import (
    ContainerFormatError,
    read_container,
    write_container,
)
from prediction_distiller.modules.apm_distiller.domain.entities import SyntheticSet
from prediction_distiller.modules.apm_distiller.domain.exceptions import (
    ChecksumError,
    DistilledFormatError,
    SyntheticSetError,
)
from prediction_distiller.modules.apm_distiller.domain.value_objects import Provenance

MAGIC = b"APMS"
VERSION = 1
_F32 = np.dtype("<f4")
_U32 = np.dtype("<u4")


def encode_payload(synset: SyntheticSet) -> bytes:
    parts = [
        np.ascontiguousarray(synset.images, dtype=_F32).tobytes(),
        np.ascontiguousarray(synset.labels, dtype=_U32).tobytes(),
    ]
    if synset.soft_labels is not None:
        parts.append(np.ascontiguousarray(synset.soft_labels, dtype=_F32).tobytes())
    return b"".join(parts)


def save_distilled(synset: SyntheticSet, path: Path) -> Path:
    payload = encode_payload(synset)
    header = {
        "count": len(synset),
        "num_classes": synset.num_classes,
        "image_shape": list(synset.image_shape),
        "ipc": synset.ipc,
        "provenance": synset.provenance.to_dict(),
        "has_logits": synset.finalized,
        "logits_dim": None if synset.soft_labels is None else int(synset.soft_labels.shape[1]),
        "crc32": zlib.crc32(payload),
        "config_hash": synset.provenance.config_hash,
    }
    write_container(Path(path), MAGIC, VERSION, header, payload)
    return Path(path)


def load_distilled(path: Path) -> SyntheticSet:
    try:
        _, header, payload = read_container(Path(path), MAGIC, (VERSION,))
    except ContainerFormatError as e:
        raise DistilledFormatError(str(e)) from e

    try:
        count = int(header["count"])
        shape = tuple(int(v) for v in header["image_shape"])
        has_logits = bool(header["has_logits"])
        logits_dim = int(header["logits_dim"]) if has_logits else 0
        expected_crc = int(header["crc32"])
        provenance = Provenance.from_dict(header["provenance"])
        num_classes, ipc = int(header["num_classes"]), int(header["ipc"])
    except (KeyError, TypeError, ValueError) as e:
        raise DistilledFormatError(f"{path}: cabecera APMS incompleta: {e}") from e

    if count < 0 or not shape or any(d <= 0 for d in shape) or (has_logits and logits_dim <= 0):
        raise DistilledFormatError(
            f"{path}: dimensiones inválidas (count={count}, image_shape={list(shape)}, logits_dim={logits_dim})"
        )

    u_bytes = count * int(np.prod(shape)) * _F32.itemsize
    y_bytes = count * _U32.itemsize
    v_bytes = count * logits_dim * _F32.itemsize
    if len(payload) != u_bytes + y_bytes + v_bytes:
        raise DistilledFormatError(
            f"{path}: payload de {len(payload)} bytes, se esperaban {u_bytes + y_bytes + v_bytes}"
        )
    if zlib.crc32(payload) != expected_crc:
        raise ChecksumError(f"{path}: CRC32 del payload no coincide")

    images = np.frombuffer(payload, dtype=_F32, count=u_bytes // 4).reshape(count, *shape)
    labels = np.frombuffer(payload, dtype=_U32, count=count, offset=u_bytes).astype(np.int64)
    soft_labels = None
    if has_logits:
        soft_labels = np.frombuffer(
            payload, dtype=_F32, count=count * logits_dim, offset=u_bytes + y_bytes
        ).reshape(count, logits_dim)

    try:
        return SyntheticSet(images, labels, num_classes, ipc, soft_labels, provenance)
    except SyntheticSetError as e:
        raise DistilledFormatError(f"{path}: {e}") from e


class ApmsDistilledStore:
    """Implementación del puerto DistilledStore."""

    def save(self, synset: SyntheticSet, path: Path) -> Path:
        return save_distilled(synset, path)

    def load(self, path: Path) -> SyntheticSet:
        return load_distilled(path)
