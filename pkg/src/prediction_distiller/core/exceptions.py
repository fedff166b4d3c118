# src/prediction_distiller/core/exceptions.py
"""
Categorías transversales de error.

Arquitectura: Core
Responsabilidad: Clasificar los fallos por naturaleza (configuración, datos,
divergencia numérica) para que la CLI los traduzca a códigos de salida sin
conocer cada módulo. Las excepciones de cada bounded context heredan de su
base de módulo Y de una de estas categorías.
"""


class ConfigurationError(Exception):
    """Parámetros inválidos o incoherentes (exit 2)."""


class DataIntegrityError(Exception):
    """Archivos ilegibles, formatos corruptos o datasets inconsistentes (exit 3)."""


class NumericDivergenceError(ArithmeticError):
    """Aparición de NaN/Inf durante el cómputo (exit 4)."""
