# src/prediction_distiller/modules/apm_distiller/domain/exceptions.py
"""
Excepciones del dominio de Destilación.

Arquitectura: Domain Layer
Responsabilidad: Los errores numéricos llevan contexto de ubicación
(época del student, índice de muestra sintética).
"""

from __future__ import annotations

from prediction_distiller.core.exceptions import (
    ConfigurationError,
    DataIntegrityError,
    NumericDivergenceError,
)


class DistillationError(Exception):
    """Clase base para errores del módulo apm-distiller."""


class InvalidDistillConfigError(DistillationError, ConfigurationError):
    """DistillConfig viola 1 <= K <= E, 1 <= segment <= B <= |S|, η, γ > 0, α >= 0."""


class UnknownMetricError(DistillationError, ConfigurationError):
    """Métrica distinta de manhattan | euclidean | cosine."""


class SyntheticSetError(DistillationError, DataIntegrityError):
    """SyntheticSet inconsistente (balance de clases, filas de v, valores no finitos)."""


class NotFinalizedError(DistillationError, ConfigurationError):
    """Se pidieron soft labels (v) de un conjunto no finalizado."""


class DistilledFormatError(DistillationError, DataIntegrityError):
    """Archivo APMS con magic, versión o cabecera inválidos."""


class ChecksumError(DistilledFormatError):
    """El CRC32 del payload no coincide con la cabecera."""


class StudentDivergenceError(DistillationError, NumericDivergenceError):
    def __init__(self, epoch: int, detail: str = ""):
        self.epoch = epoch
        super().__init__(
            f"L_θ no finita en la época {epoch} del student" + (f": {detail}" if detail else "")
        )


class SyntheticDivergenceError(DistillationError, NumericDivergenceError):
    def __init__(self, sample_index: int, detail: str = ""):
        self.sample_index = sample_index
        super().__init__(
            f"Gradiente no finito para la muestra sintética {sample_index}"
            + (f": {detail}" if detail else "")
        )
