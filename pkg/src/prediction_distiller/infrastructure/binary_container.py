# src/prediction_distiller/infrastructure/binary_container.py
"""
Contenedor binario compartido por los formatos APMC (checkpoint) y APMS
(conjunto destilado).

Arquitectura: Shared Infrastructure
Responsabilidad: Serializar `magic | u16 versión | u32 largo de cabecera |
cabecera JSON | payload` en little-endian, con escritura atómica.
"""

from __future__ import annotations

import json
import os
import struct
from pathlib import Path
from typing import Any

from prediction_distiller.core.exceptions import DataIntegrityError

_PREAMBLE = struct.Struct("<4sHI")


class ContainerFormatError(DataIntegrityError):
    """Magic, versión o longitudes inconsistentes."""


def encode_container(magic: bytes, version: int, header: dict[str, Any], payload: bytes) -> bytes:
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    return _PREAMBLE.pack(magic, version, len(header_bytes)) + header_bytes + payload


def write_container(
    path: Path, magic: bytes, version: int, header: dict[str, Any], payload: bytes
) -> None:
    """Escribe en `<path>.tmp` y renombra: un lector nunca ve un archivo a medias."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(encode_container(magic, version, header, payload))
    os.replace(tmp, path)


def decode_container(
    data: bytes, magic: bytes, supported_versions: tuple[int, ...], source: str = "<bytes>"
) -> tuple[int, dict[str, Any], bytes]:
    """Devuelve (versión, cabecera, payload). Valida magic, versión y longitudes."""
    if len(data) < _PREAMBLE.size:
        raise ContainerFormatError(f"{source}: archivo truncado ({len(data)} bytes)")

    found_magic, version, header_len = _PREAMBLE.unpack_from(data)
    if found_magic != magic:
        raise ContainerFormatError(f"{source}: magic {found_magic!r} != {magic!r}")
    if version not in supported_versions:
        raise ContainerFormatError(f"{source}: versión {version} no soportada")

    start = _PREAMBLE.size
    if len(data) < start + header_len:
        raise ContainerFormatError(f"{source}: cabecera truncada")
    try:
        header = json.loads(data[start : start + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ContainerFormatError(f"{source}: cabecera JSON ilegible") from e
    if not isinstance(header, dict):
        raise ContainerFormatError(f"{source}: la cabecera debe ser un objeto JSON")

    return version, header, data[start + header_len :]


def read_container(
    path: Path, magic: bytes, supported_versions: tuple[int, ...]
) -> tuple[int, dict[str, Any], bytes]:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ContainerFormatError(f"{path}: no se puede leer ({e.strerror})") from e
    return decode_container(data, magic, supported_versions, source=str(path))
