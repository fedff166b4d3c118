# src/prediction_distiller/modules/nn_models/application/training.py
"""
Entrenamiento por descenso de gradiente estocástico sobre grafos del tensor-core.

Arquitectura: Application Layer
Responsabilidad: Bucle SGD compartido (teachers, evaluación, sondas de
gradiente). Momentum, weight decay y decaimiento coseno son opcionales.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from enum import StrEnum
from functools import lru_cache

import numpy as np

from prediction_distiller.core.value_objects import require_non_negative, require_positive
from prediction_distiller.modules.nn_models.application.use_cases import (
    IMAGE_INPUT,
    build_logits,
    check_batch_shape,
)
from prediction_distiller.modules.nn_models.domain.entities import Checkpoint
from prediction_distiller.modules.nn_models.domain.exceptions import TrainingDivergenceError
from prediction_distiller.modules.nn_models.domain.value_objects import ArchSpec
from prediction_distiller.modules.tensor_core import Graph, NonFiniteError, Tensor, forward, value_and_grad

logger = logging.getLogger(__name__)

TARGET_INPUT = "targets"

EpochCallback = Callable[[int, Mapping[str, Tensor]], None]


class Objective(StrEnum):
    """hard: CE con etiquetas enteras; soft_ce: CE contra softmax(v); distance: d(f(x), v)."""

    HARD_CE = "hard"
    SOFT_CE = "soft-ce"
    DISTANCE = "soft-d"


@dataclass(frozen=True)
class SgdSchedule:
    epochs: int
    learning_rate: float
    batch_size: int = 0  # 0 = el conjunto completo
    momentum: float = 0.0
    weight_decay: float = 0.0
    cosine: bool = True

    def __post_init__(self) -> None:
        require_non_negative("epochs", self.epochs)
        require_positive("learning_rate", self.learning_rate)
        require_non_negative("batch_size", self.batch_size)
        require_non_negative("momentum", self.momentum)
        require_non_negative("weight_decay", self.weight_decay)
        if self.momentum >= 1:
            raise ValueError(f"momentum debe ser < 1: {self.momentum}")

    def rate_at(self, epoch: int) -> float:
        if not self.cosine or self.epochs == 0:
            return self.learning_rate
        return 0.5 * self.learning_rate * (1.0 + math.cos(math.pi * epoch / self.epochs))


@lru_cache(maxsize=64)
def objective_graph(arch: ArchSpec, objective: Objective, metric: str = "manhattan") -> Graph:
    """Pérdida media sobre el batch. Inputs: imágenes, `targets` y parámetros."""
    graph = Graph()
    logits = build_logits(graph, arch, graph.input(IMAGE_INPUT))
    targets = graph.input(TARGET_INPUT)
    if objective is Objective.HARD_CE:
        per_sample = graph.cross_entropy(logits, targets)
    elif objective is Objective.SOFT_CE:
        per_sample = graph.soft_cross_entropy(logits, targets)
    else:
        per_sample = graph.distance(metric, logits, targets)
    return graph.set_output(graph.mean(per_sample))


def softmax_rows(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return (e / e.sum(axis=1, keepdims=True)).astype(np.float32)


def prepare_targets(objective: Objective, targets: np.ndarray) -> np.ndarray:
    """hard -> enteros; soft-ce -> softmax(v); soft-d -> v tal cual."""
    if objective is Objective.HARD_CE:
        return np.asarray(targets, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.float32)
    return softmax_rows(targets) if objective is Objective.SOFT_CE else targets


def loss_and_grad(
    graph: Graph, params: Mapping[str, Tensor], images: np.ndarray, targets: np.ndarray
) -> tuple[float, dict[str, Tensor]]:
    bindings = {**params, IMAGE_INPUT: images, TARGET_INPUT: targets}
    return value_and_grad(graph, bindings, list(params))


def dataset_loss(
    graph: Graph, params: Mapping[str, Tensor], images: np.ndarray, targets: np.ndarray
) -> float:
    """Pérdida media del objetivo sobre todo el conjunto, sin backward."""
    out, _ = forward(graph, {**params, IMAGE_INPUT: images, TARGET_INPUT: targets})
    return float(np.asarray(out).reshape(()))


def gradient_norm(grads: Mapping[str, Tensor]) -> float:
    return float(np.sqrt(sum(float(np.sum(np.square(g, dtype=np.float64))) for g in grads.values())))


class SgdOptimizer:
    """Estado de momentum por parámetro. Actualiza copias, nunca los arrays de entrada."""

    def __init__(self, momentum: float = 0.0, weight_decay: float = 0.0):
        self.momentum = momentum
        self.weight_decay = weight_decay
        self._velocity: dict[str, np.ndarray] = {}

    def step(
        self, params: Mapping[str, Tensor], grads: Mapping[str, Tensor], rate: float
    ) -> dict[str, Tensor]:
        updated: dict[str, Tensor] = {}
        for name, value in params.items():
            g = grads[name]
            if self.weight_decay:
                g = g + self.weight_decay * value
            if self.momentum:
                v = self._velocity.get(name)
                v = g if v is None else self.momentum * v + g
                self._velocity[name] = v
                g = v
            updated[name] = (value - rate * g).astype(np.float32)
        return updated


def train_network(
    initial: Checkpoint,
    images: np.ndarray,
    targets: np.ndarray,
    objective: Objective,
    schedule: SgdSchedule,
    seed: int,
    metric: str = "manhattan",
    on_epoch_start: EpochCallback | None = None,
    on_epoch_end: EpochCallback | None = None,
) -> Checkpoint:
    """
    Entrena desde `initial` y devuelve un Checkpoint nuevo con meta.epoch =
    schedule.epochs. Con epochs=0 devuelve la inicialización sin cambios.

    Raises:
        TrainingDivergenceError: pérdida o gradiente no finito (con la época).
    """
    images = np.asarray(images, dtype=np.float32)
    check_batch_shape(initial.arch, images)
    targets = prepare_targets(objective, targets)
    if schedule.epochs == 0:
        return initial

    graph = objective_graph(initial.arch, objective, metric)
    rng = np.random.default_rng(seed)
    optimizer = SgdOptimizer(schedule.momentum, schedule.weight_decay)
    params: dict[str, Tensor] = {k: np.array(v) for k, v in initial.params.items()}
    n = images.shape[0]
    batch = n if schedule.batch_size in (0, None) else min(schedule.batch_size, n)

    for epoch in range(schedule.epochs):
        if on_epoch_start is not None:
            on_epoch_start(epoch, params)
        rate = schedule.rate_at(epoch)
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, batch):
            idx = order[start : start + batch]
            try:
                loss, grads = loss_and_grad(graph, params, images[idx], targets[idx])
            except NonFiniteError as e:
                raise TrainingDivergenceError(epoch, str(e)) from e
            if not math.isfinite(loss):
                raise TrainingDivergenceError(epoch, f"pérdida {loss}")
            total += loss * len(idx)
            params = optimizer.step(params, grads, rate)
        logger.debug(f"epoch={epoch} lr={rate:.5f} loss={total / max(n, 1):.5f}")
        if on_epoch_end is not None:
            on_epoch_end(epoch, params)

    return initial.with_params(params, epoch=initial.meta.epoch + schedule.epochs)
