# src/prediction_distiller/modules/nn_models/domain/exceptions.py
"""
Excepciones del dominio de Modelos.

Arquitectura: Domain Layer
Responsabilidad: Errores de arquitectura, parámetros y persistencia de checkpoints.
"""

from prediction_distiller.core.exceptions import (
    ConfigurationError,
    DataIntegrityError,
    NumericDivergenceError,
)


class ModelError(Exception):
    """Clase base para errores del módulo nn-models."""


class InvalidArchitectureError(ModelError, ConfigurationError):
    """ArchSpec viola sus invariantes (profundidad, ancho, tamaño espacial)."""


class ParameterMismatchError(ModelError, DataIntegrityError):
    """Nombres/formas de parámetros no coinciden con los generados por init."""


class InputShapeError(ModelError, ConfigurationError):
    """El batch de imágenes no coincide con la forma de entrada de la arquitectura."""


class CheckpointFormatError(ModelError, DataIntegrityError):
    """Archivo APMC corrupto, truncado o de versión desconocida."""


class TrainingDivergenceError(ModelError, NumericDivergenceError):
    """La pérdida o los gradientes dejaron de ser finitos durante el entrenamiento."""

    def __init__(self, epoch: int, detail: str = ""):
        self.epoch = epoch
        super().__init__(f"Divergencia en la época {epoch}" + (f": {detail}" if detail else ""))
