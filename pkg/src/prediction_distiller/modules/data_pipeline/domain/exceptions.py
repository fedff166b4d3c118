# src/prediction_distiller/modules/data_pipeline/domain/exceptions.py
"""
Excepciones del dominio de Datos.

Arquitectura: Domain Layer
"""

from prediction_distiller.core.exceptions import (
    ConfigurationError,
    DataIntegrityError,
    NumericDivergenceError,
)


class DataError(Exception):
    """Clase base para errores del módulo data-pipeline."""


class DatasetFormatError(DataError, DataIntegrityError):
    """Magic, conteos o longitudes de registro inconsistentes en un archivo."""


class DatasetNotFoundError(DataError, DataIntegrityError):
    """Faltan archivos del dataset. El mensaje nombra las rutas esperadas."""


class InvalidDatasetError(DataError, DataIntegrityError):
    """El LabeledDataset viola sus invariantes (etiquetas fuera de rango, conteos)."""


class InsufficientClassError(DataError, ConfigurationError):
    """Alguna clase tiene menos miembros que los pedidos por muestreo estratificado."""


class WhiteningError(DataError, NumericDivergenceError):
    """La descomposición de la covarianza falló (entrada no finita)."""
