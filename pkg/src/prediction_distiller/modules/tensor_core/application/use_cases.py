# src/prediction_distiller/modules/tensor_core/application/use_cases.py
"""
Casos de Uso del tensor-core: forward y backward (modo reverso).

Arquitectura: Application Layer
Responsabilidad: Ejecutar un Graph sobre bindings, retener activaciones y
propagar gradientes SOLO hacia las entradas pedidas.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from typing import Any

import numpy as np

from prediction_distiller.modules.tensor_core.domain.exceptions import (
    BackwardBeforeForwardError,
    GraphStructureError,
    NonFiniteError,
    NonScalarOutputError,
    UnboundInputError,
)
from prediction_distiller.modules.tensor_core.domain.graph import Graph
from prediction_distiller.modules.tensor_core.domain.primitives import PRIMITIVES
from prediction_distiller.modules.tensor_core.domain.value_objects import (
    OpKind,
    Tensor,
)


def _check_finite(value: np.ndarray, node_id: int, op: str, phase: str) -> None:
    if np.issubdtype(value.dtype, np.floating) and not np.isfinite(value).all():
        raise NonFiniteError(node_id, op, phase)


class GraphRunner:
    """
    Ejecutor de un Graph. Una instancia por hilo: guarda las activaciones del
    último forward para el backward siguiente.
    """

    def __init__(self, graph: Graph):
        if graph.output is None:
            raise GraphStructureError("El grafo no tiene salida designada")
        self._graph = graph
        self._values: list[np.ndarray] | None = None
        self._caches: list[Any] = []

    @property
    def graph(self) -> Graph:
        return self._graph

    def forward(self, bindings: Mapping[str, Any]) -> Tensor:
        """
        Evalúa el grafo. Las entradas float conservan su dtype; las enteras
        (etiquetas) se pasan tal cual.
        """
        missing = [name for name in self._graph.input_names if name not in bindings]
        if missing:
            raise UnboundInputError(f"Entradas sin asignar: {sorted(missing)}")

        values: list[np.ndarray] = []
        caches: list[Any] = []
        for node in self._graph.nodes:
            cache = None
            if node.op is OpKind.INPUT:
                value = np.asarray(bindings[node.attrs["name"]])
            elif node.op is OpKind.CONST:
                value = node.attrs["value"]
            else:
                xs = [values[i] for i in node.inputs]
                value, cache = PRIMITIVES[node.op].forward(xs, node.attrs)
            _check_finite(value, node.node_id, node.op, "forward")
            values.append(value)
            caches.append(cache)

        self._values = values
        self._caches = caches
        return values[self._output_id]

    def value(self, node_id: int) -> Tensor:
        """Activación retenida de un nodo del último forward."""
        if self._values is None:
            raise BackwardBeforeForwardError("No hay activaciones: ejecute forward")
        return self._values[node_id]

    def backward(self, wrt: Iterable[str]) -> dict[str, Tensor]:
        """
        Gradientes de la salida escalar respecto a los inputs nombrados.
        Las ramas que no conducen a `wrt` no se calculan.
        """
        if self._values is None:
            raise BackwardBeforeForwardError("backward llamado antes de forward")
        output = self._values[self._output_id]
        if output.size != 1:
            raise NonScalarOutputError(f"Salida de forma {output.shape}, se exige escalar")

        wanted = set(wrt)
        unknown = wanted - set(self._graph.input_names)
        if unknown:
            raise UnboundInputError(f"wrt contiene entradas inexistentes: {sorted(unknown)}")

        nodes = self._graph.nodes
        requires = [False] * len(nodes)
        for node in nodes:
            if node.op is OpKind.INPUT:
                requires[node.node_id] = node.attrs["name"] in wanted
            else:
                requires[node.node_id] = any(requires[i] for i in node.inputs)

        grads: dict[int, np.ndarray] = {
            self._output_id: np.ones_like(output, dtype=output.dtype)
        }
        for node in reversed(nodes[: self._output_id + 1]):
            g = grads.pop(node.node_id, None)
            if g is None or not requires[node.node_id]:
                continue
            if node.op is OpKind.INPUT:
                grads[node.node_id] = g  # se recoge al final
                continue
            needs = [requires[i] for i in node.inputs]
            xs = [self._values[i] for i in node.inputs]
            input_grads = PRIMITIVES[node.op].backward(
                g, xs, self._values[node.node_id], self._caches[node.node_id], node.attrs, needs
            )
            for ref, need, ig in zip(node.inputs, needs, input_grads, strict=True):
                if not need or ig is None:
                    continue
                _check_finite(ig, node.node_id, node.op, "backward")
                grads[ref] = grads[ref] + ig if ref in grads else ig

        result: dict[str, Tensor] = {}
        for name in wanted:
            node_id = self._graph.input_id(name)
            bound = self._values[node_id]
            grad = grads.get(node_id)
            if grad is None:
                grad = np.zeros_like(bound, dtype=output.dtype)
            result[name] = np.asarray(grad, dtype=bound.dtype).reshape(bound.shape)
        return result

    @property
    def _output_id(self) -> int:
        assert self._graph.output is not None
        return self._graph.output


def forward(graph: Graph, bindings: Mapping[str, Any]) -> tuple[Tensor, GraphRunner]:
    """Forward funcional: devuelve la salida y el runner con las activaciones."""
    runner = GraphRunner(graph)
    return runner.forward(bindings), runner


def value_and_grad(
    graph: Graph, bindings: Mapping[str, Any], wrt: Iterable[str]
) -> tuple[float, dict[str, Tensor]]:
    """Atajo forward + backward para una salida escalar."""
    runner = GraphRunner(graph)
    out = runner.forward(bindings)
    return float(np.asarray(out).reshape(())), runner.backward(wrt)
