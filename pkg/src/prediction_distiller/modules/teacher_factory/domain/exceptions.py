# src/prediction_distiller/modules/teacher_factory/domain/exceptions.py
"""
Excepciones del dominio de Teachers.

Arquitectura: Domain Layer
"""

from __future__ import annotations

from pathlib import Path

from prediction_distiller.core.exceptions import (
    ConfigurationError,
    DataIntegrityError,
    NumericDivergenceError,
)


class TeacherError(Exception):
    """Clase base para errores del módulo teacher-factory."""


class EmptyPoolError(TeacherError, ConfigurationError):
    """Se pidió muestrear o construir un pool sin miembros."""


class InconsistentPoolError(TeacherError, DataIntegrityError):
    """Miembros con distinta arquitectura o dataset, o por debajo del piso de convergencia."""


class PoolIntegrityError(TeacherError, DataIntegrityError):
    """Manifest ilegible o hash de archivo que no coincide."""


class NotConvergedError(TeacherError, NumericDivergenceError):
    """El teacher terminó por debajo del piso de precisión de entrenamiento."""

    def __init__(self, seed: int, train_accuracy: float, floor: float):
        self.seed = seed
        self.train_accuracy = train_accuracy
        self.floor = floor
        super().__init__(
            f"Teacher seed={seed}: precisión de train {train_accuracy:.4f} < piso {floor:.4f}"
        )


class PoolBuildError(TeacherError):
    """Falló algún miembro. `manifest_path` apunta al manifest parcial, si se escribió."""

    def __init__(self, message: str, manifest_path: Path | None = None):
        self.manifest_path = manifest_path
        super().__init__(message)
