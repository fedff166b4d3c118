# src/prediction_distiller/modules/eval_harness/domain/exceptions.py
"""
Excepciones del dominio de Evaluación.

Arquitectura: Domain Layer
"""

from prediction_distiller.core.exceptions import ConfigurationError, DataIntegrityError


class EvaluationError(Exception):
    """Clase base para errores del módulo eval-harness."""


class InvalidScoresError(EvaluationError, ConfigurationError):
    """Listas de puntuaciones de distinta longitud o con menos de 2 elementos."""


class InvalidStudyError(EvaluationError, ConfigurationError):
    """Estudio desconocido, barrido vacío o inválido, o valores para un estudio sin barrido."""


class IncompatibleSetsError(EvaluationError, ConfigurationError):
    """Conjuntos sintéticos con distinta forma, clases o estado de finalización."""


class EmptySyntheticSetError(EvaluationError, ConfigurationError):
    """Conjunto sin imágenes: no hay nada que entrenar ni trazar."""


class AllSeedsFailedError(EvaluationError, DataIntegrityError):
    """Ninguna semilla de evaluación terminó."""


class PartialStudyError(EvaluationError, DataIntegrityError):
    """Algún miembro de un estudio falló: los estudios parciales se rechazan."""
