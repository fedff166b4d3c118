# src/prediction_distiller/modules/tensor_core/domain/graph.py
"""
Entidad Graph: lista ordenada de nodos primitivos con una salida designada.

Arquitectura: Modular Monolith
Capa: Domain
Responsabilidad: Construir grafos acíclicos por construcción (cada nodo solo
referencia nodos previos) y validar su estructura.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .exceptions import GraphStructureError
from .value_objects import Node, OpKind

# === Guía de Organización ===
# ✅ El orden de construcción ES el orden topológico.
# ✅ Los métodos devuelven el id (int) del nodo creado.
# ❌ Sin estado de ejecución: las activaciones viven en GraphRunner.


class Graph:
    """
    Grafo de cómputo estático. Independiente del tamaño de batch: las formas
    se resuelven en forward a partir de los bindings.
    """

    def __init__(self) -> None:
        self._nodes: list[Node] = []
        self._inputs: dict[str, int] = {}
        self.output: int | None = None

    # --- Introspección ---

    @property
    def nodes(self) -> tuple[Node, ...]:
        return tuple(self._nodes)

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(self._inputs)

    def input_id(self, name: str) -> int:
        return self._inputs[name]

    def __len__(self) -> int:
        return len(self._nodes)

    # --- Construcción ---

    def add_node(self, op: OpKind, inputs: tuple[int, ...] = (), **attrs: Any) -> int:
        node_id = len(self._nodes)
        for ref in inputs:
            if not 0 <= ref < node_id:
                raise GraphStructureError(
                    f"El nodo {node_id} ({op}) referencia un id inexistente: {ref}"
                )
        self._nodes.append(Node(node_id=node_id, op=op, inputs=inputs, attrs=attrs))
        return node_id

    def input(self, name: str) -> int:
        """Entrada libre con nombre. Idempotente: el mismo nombre reusa el nodo."""
        if name in self._inputs:
            return self._inputs[name]
        node_id = self.add_node(OpKind.INPUT, name=name)
        self._inputs[name] = node_id
        return node_id

    def const(self, value: Any) -> int:
        return self.add_node(OpKind.CONST, value=np.asarray(value))

    def matmul(self, a: int, b: int) -> int:
        return self.add_node(OpKind.MATMUL, (a, b))

    def conv2d(self, x: int, w: int, b: int, stride: int = 1, pad: int = 0) -> int:
        if stride < 1 or pad < 0:
            raise GraphStructureError(f"conv2d: stride={stride}, pad={pad} inválidos")
        return self.add_node(OpKind.CONV2D, (x, w, b), stride=stride, pad=pad)

    def instance_norm(self, x: int, gamma: int, beta: int, eps: float = 1e-5) -> int:
        return self.add_node(OpKind.INSTANCE_NORM, (x, gamma, beta), eps=eps)

    def relu(self, x: int) -> int:
        return self.add_node(OpKind.RELU, (x,))

    def avg_pool2(self, x: int) -> int:
        return self.add_node(OpKind.AVG_POOL2, (x,))

    def flatten(self, x: int) -> int:
        return self.add_node(OpKind.FLATTEN, (x,))

    def add(self, a: int, b: int) -> int:
        return self.add_node(OpKind.ADD, (a, b))

    def sub(self, a: int, b: int) -> int:
        return self.add_node(OpKind.SUB, (a, b))

    def mul(self, a: int, b: int) -> int:
        return self.add_node(OpKind.MUL, (a, b))

    def abs(self, x: int) -> int:
        return self.add_node(OpKind.ABS, (x,))

    def log(self, x: int) -> int:
        return self.add_node(OpKind.LOG, (x,))

    def neg(self, x: int) -> int:
        return self.add_node(OpKind.NEG, (x,))

    def scale(self, x: int, factor: float) -> int:
        return self.add_node(OpKind.SCALE, (x,), factor=float(factor))

    def clamp_min(self, x: int, floor: float) -> int:
        return self.add_node(OpKind.CLAMP_MIN, (x,), floor=float(floor))

    def sum(self, x: int, axis: int | None = None) -> int:
        return self.add_node(OpKind.SUM, (x,), axis=axis)

    def mean(self, x: int, axis: int | None = None) -> int:
        return self.add_node(OpKind.MEAN, (x,), axis=axis)

    def softmax(self, x: int) -> int:
        return self.add_node(OpKind.SOFTMAX, (x,))

    def cross_entropy(self, logits: int, labels: int) -> int:
        """Pérdida por fila (N,) con etiquetas enteras."""
        return self.add_node(OpKind.CROSS_ENTROPY, (logits, labels))

    def soft_cross_entropy(self, logits: int, target_probs: int) -> int:
        return self.add_node(OpKind.SOFT_CROSS_ENTROPY, (logits, target_probs))

    def distance(self, metric: str, a: int, b: int) -> int:
        """Distancia por fila entre matrices de logits: manhattan | euclidean | cosine."""
        ops = {
            "manhattan": OpKind.L1_DISTANCE,
            "euclidean": OpKind.L2_DISTANCE,
            "cosine": OpKind.COSINE_DISTANCE,
        }
        if metric not in ops:
            raise GraphStructureError(f"Métrica desconocida: {metric}")
        return self.add_node(ops[metric], (a, b))

    def set_output(self, node_id: int) -> Graph:
        if not 0 <= node_id < len(self._nodes):
            raise GraphStructureError(f"Salida inexistente: {node_id}")
        self.output = node_id
        return self
