# src/prediction_distiller/modules/teacher_factory/domain/ports.py
"""
Puertos del dominio de Teachers.

Arquitectura: Hexagonal (Ports)
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Any, Protocol

from prediction_distiller.modules.nn_models import Checkpoint

from .entities import TeacherPool


class PoolStore(Protocol):
    """Directorio de checkpoints `teacher_<seed>.apmc` + `manifest.json`."""

    def save(self, pool: TeacherPool, directory: Path, config_hash: str = "") -> Path: ...

    def save_partial(
        self,
        directory: Path,
        completed: Sequence[Checkpoint],
        failures: Sequence[dict[str, Any]],
        config_hash: str = "",
    ) -> Path: ...

    def load(self, directory: Path) -> TeacherPool: ...
