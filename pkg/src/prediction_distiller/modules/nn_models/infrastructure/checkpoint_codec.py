# src/prediction_distiller/modules/nn_models/infrastructure/checkpoint_codec.py
"""
Códec APMC de checkpoints.

Arquitectura: Infrastructure / Adapters
Responsabilidad: Persistir un Checkpoint bit a bit:
    "APMC" | u16 versión=1 | u32 largo cabecera | cabecera JSON
    (arch, meta, tabla ordenada nombre/forma/offset/nbytes) | float32 LE
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import numpy as np

from prediction_distiller.infrastructure.binary_container import (
    ContainerFormatError,
    read_container,
    write_container,
)
from prediction_distiller.modules.nn_models.application.use_cases import parameter_shapes
from prediction_distiller.modules.nn_models.domain.entities import Checkpoint
from prediction_distiller.modules.nn_models.domain.exceptions import (
    CheckpointFormatError,
    InvalidArchitectureError,
)
from prediction_distiller.modules.nn_models.domain.value_objects import (
    ArchSpec,
    CheckpointMeta,
)

MAGIC = b"APMC"
VERSION = 1
_DTYPE = np.dtype("<f4")


def _tensor_table(checkpoint: Checkpoint) -> tuple[list[dict[str, Any]], bytes]:
    table: list[dict[str, Any]] = []
    chunks: list[bytes] = []
    offset = 0
    for name, value in checkpoint.params.items():
        raw = np.ascontiguousarray(value, dtype=_DTYPE).tobytes()
        table.append({"name": name, "shape": list(value.shape), "offset": offset, "nbytes": len(raw)})
        chunks.append(raw)
        offset += len(raw)
    return table, b"".join(chunks)


def _table_entry(entry: Any, path: Path) -> tuple[str, tuple[int, ...], int, int]:
    """(nombre, forma, offset, nbytes) de una fila de la tabla, con tipos verificados."""
    if not isinstance(entry, dict):
        raise CheckpointFormatError(f"{path}: fila de tabla de tensores inválida: {entry!r}")
    name, shape = entry.get("name"), entry.get("shape")
    offset, nbytes = entry.get("offset"), entry.get("nbytes")
    ints = (offset, nbytes, *(shape if isinstance(shape, list) else []))
    if (
        not isinstance(name, str)
        or not isinstance(shape, list)
        or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in ints)
    ):
        raise CheckpointFormatError(f"{path}: fila de tabla de tensores inválida: {entry!r}")
    return name, tuple(shape), offset, nbytes


def save_checkpoint(checkpoint: Checkpoint, path: Path) -> Path:
    table, payload = _tensor_table(checkpoint)
    header = {
        "arch": checkpoint.arch.to_dict(),
        "meta": checkpoint.meta.to_dict(),
        "tensors": table,
        "payload_bytes": len(payload),
    }
    write_container(Path(path), MAGIC, VERSION, header, payload)
    return Path(path)


def load_checkpoint(path: Path) -> Checkpoint:
    """Carga y valida. Nunca devuelve un checkpoint parcial."""
    try:
        _, header, payload = read_container(Path(path), MAGIC, (VERSION,))
    except ContainerFormatError as e:
        raise CheckpointFormatError(str(e)) from e

    try:
        arch = ArchSpec.from_dict(header["arch"])
        meta = CheckpointMeta.from_dict(header["meta"])
        table = header["tensors"]
        declared = int(header["payload_bytes"])
    except (KeyError, TypeError, ValueError, InvalidArchitectureError) as e:
        raise CheckpointFormatError(f"{path}: cabecera APMC incompleta: {e}") from e

    if len(payload) != declared:
        raise CheckpointFormatError(
            f"{path}: payload truncado ({len(payload)} de {declared} bytes)"
        )

    if not isinstance(table, list):
        raise CheckpointFormatError(f"{path}: la tabla de tensores no es una lista")
    entries = [_table_entry(entry, path) for entry in table]
    expected = parameter_shapes(arch)
    names = [name for name, *_ in entries]
    if names != list(expected):
        raise CheckpointFormatError(f"{path}: tabla de tensores {names} no coincide con {arch.name}")

    params: dict[str, np.ndarray] = {}
    for name, shape, offset, nbytes in entries:
        if shape != expected[name]:
            raise CheckpointFormatError(f"{path}: {name} forma {shape} != {expected[name]}")
        if nbytes != int(np.prod(shape)) * _DTYPE.itemsize or offset + nbytes > len(payload):
            raise CheckpointFormatError(f"{path}: offsets inconsistentes para {name}")
        params[name] = np.frombuffer(payload, dtype=_DTYPE, count=nbytes // 4, offset=offset).reshape(shape)

    return Checkpoint(arch=arch, params=params, meta=meta)


class ApmcCheckpointStore:
    """Implementación del puerto CheckpointStore."""

    def save(self, checkpoint: Checkpoint, path: Path) -> None:
        save_checkpoint(checkpoint, path)

    def load(self, path: Path) -> Checkpoint:
        return load_checkpoint(path)
