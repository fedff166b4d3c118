# src/prediction_distiller/modules/teacher_factory/infrastructure/pool_store.py
"""
Persistencia del pool de teachers en un directorio.

Arquitectura: Infrastructure (Adapters)
Responsabilidad: `teacher_<seed>.apmc` por miembro + `manifest.json`
(arch, hiper-parámetros, semillas, precisiones, SHA-256 de cada archivo).
El manifest no lleva marcas de tiempo: misma configuración, mismo manifest.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from prediction_distiller.modules.nn_models import (
    ArchSpec,
    Checkpoint,
    CheckpointFormatError,
    load_checkpoint,
    save_checkpoint,
)
from prediction_distiller.modules.teacher_factory.domain.entities import TeacherPool
from prediction_distiller.modules.teacher_factory.domain.exceptions import PoolIntegrityError
from prediction_distiller.modules.teacher_factory.domain.value_objects import (
    TrainingHyperParams,
)

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
MANIFEST_FORMAT = "apm-teacher-pool"
MANIFEST_VERSION = 1


def teacher_filename(seed: int) -> str:
    return f"teacher_{seed}.apmc"


def file_sha256(path: Path) -> str:
    hasher = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            hasher.update(chunk)
    return hasher.hexdigest()


def _member_entry(directory: Path, teacher: Checkpoint) -> dict[str, Any]:
    path = save_checkpoint(teacher, directory / teacher_filename(teacher.meta.seed))
    return {
        "seed": teacher.meta.seed,
        "file": path.name,
        "sha256": file_sha256(path),
        "train_accuracy": teacher.meta.train_accuracy,
        "test_accuracy": teacher.meta.test_accuracy,
    }


def _write_manifest(directory: Path, manifest: dict[str, Any]) -> Path:
    path = directory / MANIFEST_NAME
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8")
    os.replace(tmp, path)
    return path


class DirectoryPoolStore:
    """Implementación del puerto PoolStore sobre el sistema de archivos local."""

    def save(self, pool: TeacherPool, directory: Path, config_hash: str = "") -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        manifest = {
            "format": MANIFEST_FORMAT,
            "version": MANIFEST_VERSION,
            "status": "complete",
            "arch": pool.arch.to_dict(),
            "dataset_tag": pool.dataset_tag,
            "hyper_params": pool.hyper_params.to_dict(),
            "config_hash": config_hash,
            "members": [_member_entry(directory, t) for t in pool.teachers],
            "failures": [],
        }
        path = _write_manifest(directory, manifest)
        logger.info(f"Pool de {len(pool)} teachers guardado en {directory}")
        return path

    def save_partial(
        self,
        directory: Path,
        completed: Sequence[Checkpoint],
        failures: Sequence[dict[str, Any]],
        config_hash: str = "",
    ) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        manifest = {
            "format": MANIFEST_FORMAT,
            "version": MANIFEST_VERSION,
            "status": "partial",
            "arch": completed[0].arch.to_dict() if completed else None,
            "dataset_tag": completed[0].meta.dataset_tag if completed else None,
            "config_hash": config_hash,
            "members": [_member_entry(directory, t) for t in completed],
            "failures": list(failures),
        }
        path = _write_manifest(directory, manifest)
        logger.warning(f"Manifest parcial escrito en {path} ({len(failures)} fallos)")
        return path

    def load(self, directory: Path) -> TeacherPool:
        """Reconstruye el pool verificando el hash de cada archivo."""
        directory = Path(directory)
        manifest = read_manifest(directory)
        if manifest.get("status") != "complete":
            raise PoolIntegrityError(f"{directory}: el manifest es parcial, pool inutilizable")

        try:
            arch = ArchSpec.from_dict(manifest["arch"])
            hp = TrainingHyperParams.from_dict(manifest["hyper_params"])
            members = manifest["members"]
            dataset_tag = manifest["dataset_tag"]
        except (KeyError, TypeError, ValueError) as e:
            raise PoolIntegrityError(f"{directory}: manifest incompleto: {e}") from e

        teachers = []
        for entry in members:
            path = directory / entry["file"]
            if not path.is_file():
                raise PoolIntegrityError(f"Falta el checkpoint {path}")
            digest = file_sha256(path)
            if digest != entry["sha256"]:
                raise PoolIntegrityError(f"{path}: SHA-256 {digest[:12]}… no coincide con el manifest")
            try:
                teachers.append(load_checkpoint(path))
            except CheckpointFormatError as e:
                raise PoolIntegrityError(f"{path}: {e}") from e

        return TeacherPool(arch, tuple(teachers), dataset_tag, hp)


def read_manifest(directory: Path) -> dict[str, Any]:
    path = Path(directory) / MANIFEST_NAME
    if not path.is_file():
        raise PoolIntegrityError(f"No existe el manifest del pool: {path}")
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise PoolIntegrityError(f"{path}: manifest ilegible: {e}") from e
    if manifest.get("format") != MANIFEST_FORMAT or manifest.get("version") != MANIFEST_VERSION:
        raise PoolIntegrityError(f"{path}: formato/versión de manifest desconocidos")
    return dict(manifest)


def load_pool(directory: Path) -> TeacherPool:
    return DirectoryPoolStore().load(directory)
