# src/prediction_distiller/modules/tensor_core/__init__.py
"""
Módulo tensor-core: tensores float32 y diferenciación en modo reverso.
"""

from __future__ import annotations

from .application.gradcheck import GradCheckResult, gradient_check
from .application.use_cases import GraphRunner, forward, value_and_grad
from .domain.exceptions import (
    BackwardBeforeForwardError,
    GraphStructureError,
    NonFiniteError,
    NonScalarOutputError,
    ShapeMismatchError,
    TensorError,
    UnboundInputError,
)
from .domain.graph import Graph
from .domain.value_objects import Node, OpKind, Tensor, as_tensor, frozen_tensor

__all__ = [
    "BackwardBeforeForwardError",
    "GradCheckResult",
    "Graph",
    "GraphRunner",
    "GraphStructureError",
    "Node",
    "NonFiniteError",
    "NonScalarOutputError",
    "OpKind",
    "ShapeMismatchError",
    "Tensor",
    "TensorError",
    "UnboundInputError",
    "as_tensor",
    "forward",
    "frozen_tensor",
    "gradient_check",
    "value_and_grad",
]
