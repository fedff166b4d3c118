# src/prediction_distiller/modules/tensor_core/domain/exceptions.py
"""
Excepciones del motor de tensores y diferenciación.

Arquitectura: Domain Layer
Responsabilidad: Errores semánticos del grafo, independientes de numpy.
"""

from prediction_distiller.core.exceptions import (
    ConfigurationError,
    NumericDivergenceError,
)


class TensorError(Exception):
    """Clase base para errores del tensor-core."""


class GraphStructureError(TensorError, ConfigurationError):
    """Grafo mal formado: ids inexistentes, ciclos, aridad incorrecta."""


class ShapeMismatchError(TensorError, ConfigurationError):
    """Las formas de las entradas no cumplen las reglas del primitivo."""


class UnboundInputError(TensorError, ConfigurationError):
    """Entradas libres del grafo sin tensor asignado."""


class BackwardBeforeForwardError(TensorError, ConfigurationError):
    """Se pidió backward sin un forward previo."""


class NonScalarOutputError(TensorError, ConfigurationError):
    """backward exige una salida escalar."""


class NonFiniteError(TensorError, NumericDivergenceError):
    """Un nodo produjo NaN/Inf. Conserva el id y el tipo de operación."""

    def __init__(self, node_id: int, op: str, phase: str = "forward"):
        self.node_id = node_id
        self.op = op
        self.phase = phase
        super().__init__(f"Valor no finito en {phase} del nodo {node_id} ({op})")
