# src/prediction_distiller/modules/eval_harness/application/probes.py
"""
Sonda de norma de gradiente durante el entrenamiento sobre S.

Arquitectura: Application Layer
Responsabilidad: Registrar ‖∇_θ ℓ(θ, S)‖₂ sobre el conjunto completo al
inicio de cada época, y resumir la traza con el cociente pico/mediana.
"""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np

from prediction_distiller.modules.apm_distiller import Metric, SyntheticSet
from prediction_distiller.modules.eval_harness.application.evaluation import training_targets
from prediction_distiller.modules.eval_harness.domain.exceptions import EmptySyntheticSetError
from prediction_distiller.modules.eval_harness.domain.value_objects import LabelMode
from prediction_distiller.modules.nn_models import (
    ArchSpec,
    Role,
    SgdSchedule,
    gradient_norm,
    init_params,
    loss_and_grad,
    objective_graph,
    prepare_targets,
    train_network,
)
from prediction_distiller.modules.tensor_core import Tensor

DEFAULT_WINDOW = 0.1


def gradient_norm_trace(
    synset: SyntheticSet,
    arch: ArchSpec,
    epochs: int,
    seed: int,
    label_mode: LabelMode | str = LabelMode.SOFT_D,
    learning_rate: float = 0.01,
    metric: Metric | str = Metric.MANHATTAN,
    batch_size: int = 0,
) -> list[tuple[int, float]]:
    """Pares (época, norma); la época e usa los parámetros tras e épocas. Longitud = epochs."""
    if len(synset) == 0:
        raise EmptySyntheticSetError("No se traza la norma de gradiente de un conjunto vacío")
    mode = LabelMode(label_mode)
    metric_name = str(Metric(metric))
    raw_targets = training_targets(synset, arch, mode)
    targets = prepare_targets(mode.objective, raw_targets)
    graph = objective_graph(arch, mode.objective, metric_name)
    trace: list[tuple[int, float]] = []

    def record(epoch: int, params: Mapping[str, Tensor]) -> None:
        _, grads = loss_and_grad(graph, params, synset.images, targets)
        trace.append((epoch, gradient_norm(grads)))

    initial = init_params(arch, seed, role=Role.STUDENT)
    schedule = SgdSchedule(epochs, learning_rate, batch_size=batch_size, cosine=True)
    train_network(
        initial, synset.images, raw_targets, mode.objective, schedule, seed,
        metric=metric_name, on_epoch_start=record,
    )
    return trace


def peak_to_median_ratio(
    trace: list[tuple[int, float]], epoch: int, window: float = DEFAULT_WINDOW
) -> float:
    """max(norma en e ± window·E) / mediana(traza completa)."""
    if not trace:
        raise EmptySyntheticSetError("Traza vacía")
    values = np.array([v for _, v in trace], dtype=np.float64)
    epochs = np.array([e for e, _ in trace])
    radius = max(1, int(round(window * len(trace))))
    in_window = np.abs(epochs - epoch) <= radius
    if not in_window.any():
        raise ValueError(f"La ventana {epoch}±{radius} no cubre ninguna época de la traza")
    median = float(np.median(values))
    peak = float(values[in_window].max())
    return peak / median if median > 0 else float("inf") if peak > 0 else 1.0
