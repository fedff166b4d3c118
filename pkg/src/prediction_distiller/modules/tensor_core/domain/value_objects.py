# src/prediction_distiller/modules/tensor_core/domain/value_objects.py
"""
Value Objects del tensor-core: Tensor, OpKind y Node.

Arquitectura: Modular Monolith
Capa: Domain
Responsabilidad: Representar el almacenamiento numérico (float32, row-major)
y los nodos inmutables del grafo de cómputo.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
import numpy.typing as npt

from .exceptions import ShapeMismatchError

# Un Tensor es un ndarray contiguo: la forma vive en .shape y los datos en el buffer.
Tensor = npt.NDArray[np.floating[Any]]


def as_tensor(value: Any, dtype: npt.DTypeLike = np.float32) -> Tensor:
    """Copia (si hace falta) a un buffer contiguo row-major del dtype pedido."""
    return np.ascontiguousarray(value, dtype=dtype)


def frozen_tensor(value: Any) -> Tensor:
    """Tensor float32 de solo lectura: semántica de valor para compartir entre hilos."""
    tensor = np.array(value, dtype=np.float32, copy=True, order="C")
    tensor.flags.writeable = False
    return tensor


def check_same_shape(a: Tensor, b: Tensor, context: str) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{context}: formas {a.shape} y {b.shape} incompatibles")


class OpKind(StrEnum):
    INPUT = "input"
    CONST = "const"
    MATMUL = "matmul"
    CONV2D = "conv2d"
    INSTANCE_NORM = "instance_norm"
    RELU = "relu"
    AVG_POOL2 = "avg_pool2"
    FLATTEN = "flatten"
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    ABS = "abs"
    LOG = "log"
    NEG = "neg"
    SCALE = "scale"
    CLAMP_MIN = "clamp_min"
    SUM = "sum"
    MEAN = "mean"
    SOFTMAX = "softmax"
    CROSS_ENTROPY = "cross_entropy"
    SOFT_CROSS_ENTROPY = "soft_cross_entropy"
    L1_DISTANCE = "l1_distance"
    L2_DISTANCE = "l2_distance"
    COSINE_DISTANCE = "cosine_distance"


@dataclass(frozen=True)
class Node:
    """
    Nodo primitivo del grafo.

    Invariantes:
    1. Los ids de entrada son estrictamente menores que node_id (orden topológico).
    2. INPUT lleva attrs["name"]; CONST lleva attrs["value"].
    """

    node_id: int
    op: OpKind
    inputs: tuple[int, ...] = ()
    attrs: dict[str, Any] = field(default_factory=dict, compare=False)
