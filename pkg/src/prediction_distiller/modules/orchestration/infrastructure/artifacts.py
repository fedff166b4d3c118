# src/prediction_distiller/modules/orchestration/infrastructure/artifacts.py
"""
Lectura del sello de configuración de cada tipo de artefacto.

Arquitectura: Infrastructure / Adapters
Responsabilidad: Extraer el config_hash embebido (manifest del pool, APMS,
reportes JSON, CSV con cabecera `# config_hash:`).
"""

from __future__ import annotations

import json
from pathlib import Path

from prediction_distiller.infrastructure.binary_container import ContainerFormatError, read_container
from prediction_distiller.infrastructure.hashed_csv import read_csv_with_hash
from prediction_distiller.modules.apm_distiller.infrastructure.distilled_codec import MAGIC, VERSION
from prediction_distiller.modules.orchestration.domain.exceptions import ArtifactError
from prediction_distiller.modules.teacher_factory import MANIFEST_NAME, PoolIntegrityError, read_manifest


def embedded_config_hash(path: Path) -> str:
    path = Path(path)
    if path.is_dir() or path.name == MANIFEST_NAME:
        directory = path if path.is_dir() else path.parent
        try:
            return str(read_manifest(directory).get("config_hash", ""))
        except PoolIntegrityError as e:
            raise ArtifactError(str(e)) from e
    if not path.is_file():
        raise ArtifactError(f"No existe el artefacto: {path}")

    suffix = path.suffix.lower()
    if suffix == ".apms":
        try:
            _, header, _ = read_container(path, MAGIC, (VERSION,))
        except ContainerFormatError as e:
            raise ArtifactError(str(e)) from e
        return str(header.get("config_hash", ""))
    if suffix == ".csv":
        return read_csv_with_hash(path)[0]
    if suffix == ".json":
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ArtifactError(f"{path}: JSON ilegible: {e}") from e
        return str(data.get("config_hash", "")) if isinstance(data, dict) else ""
    raise ArtifactError(f"{path}: tipo de artefacto desconocido ({suffix or 'sin extensión'})")
