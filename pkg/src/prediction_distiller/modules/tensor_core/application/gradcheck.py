# src/prediction_distiller/modules/tensor_core/application/gradcheck.py
"""
Oráculo de diferencias finitas centrales para validar backward.

Arquitectura: Application Layer
Responsabilidad: Comparar el gradiente analítico con (f(x+h) - f(x-h)) / 2h.
El cómputo se hace en float64 sobre los MISMOS primitivos, para que el error
de redondeo no domine la comparación.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from prediction_distiller.modules.tensor_core.application.use_cases import GraphRunner
from prediction_distiller.modules.tensor_core.domain.graph import Graph
from prediction_distiller.modules.tensor_core.domain.value_objects import Tensor


@dataclass(frozen=True)
class GradCheckResult:
    name: str
    max_relative_error: float
    max_abs_error: float

    def passed(self, tolerance: float = 1e-3) -> bool:
        return self.max_relative_error < tolerance


def relative_error(analytic: Tensor, numeric: Tensor, floor: float = 1e-6) -> Tensor:
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / denom


def numeric_gradient(
    graph: Graph, bindings: Mapping[str, Tensor], name: str, step: float = 1e-3
) -> Tensor:
    runner = GraphRunner(graph)
    point = {k: np.asarray(v) for k, v in bindings.items()}
    base = point[name].astype(np.float64, copy=True)
    grad = np.zeros_like(base)
    flat = base.reshape(-1)
    flat_grad = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + step
        plus = float(runner.forward({**point, name: base}).sum())
        flat[i] = original - step
        minus = float(runner.forward({**point, name: base}).sum())
        flat[i] = original
        flat_grad[i] = (plus - minus) / (2 * step)
    return grad


def gradient_check(
    graph: Graph,
    bindings: Mapping[str, Tensor],
    wrt: list[str] | None = None,
    step: float = 1e-3,
) -> list[GradCheckResult]:
    """Chequea cada input flotante de `wrt` (por defecto, todos los flotantes)."""
    promoted = {
        k: (np.asarray(v, dtype=np.float64) if np.issubdtype(np.asarray(v).dtype, np.floating) else np.asarray(v))
        for k, v in bindings.items()
    }
    if wrt is None:
        wrt = [k for k, v in promoted.items() if np.issubdtype(v.dtype, np.floating)]

    runner = GraphRunner(graph)
    runner.forward(promoted)
    analytic = runner.backward(wrt)

    results = []
    for name in wrt:
        numeric = numeric_gradient(graph, promoted, name, step)
        rel = relative_error(analytic[name], numeric)
        results.append(
            GradCheckResult(
                name=name,
                max_relative_error=float(rel.max(initial=0.0)),
                max_abs_error=float(np.abs(analytic[name] - numeric).max(initial=0.0)),
            )
        )
    return results
