# src/prediction_distiller/modules/apm_distiller/application/student_phase.py
"""
Fase del student: imitar las predicciones del teacher sobre el mini-batch
sintético y guardar checkpoints intermedios.

Arquitectura: Application Layer
Responsabilidad: Descenso de gradiente plano sobre
L_θ = (1/B) Σ d(f_T(u), f_S(u)), guardando θ^S_e cuando e mod ⌊E/K⌋ = 0.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from prediction_distiller.modules.apm_distiller.domain.exceptions import StudentDivergenceError
from prediction_distiller.modules.apm_distiller.domain.value_objects import DistillConfig
from prediction_distiller.modules.nn_models import (
    Checkpoint,
    Objective,
    Role,
    SgdOptimizer,
    forward_logits,
    init_params,
    loss_and_grad,
    objective_graph,
)
from prediction_distiller.modules.tensor_core import NonFiniteError, Tensor

logger = logging.getLogger(__name__)


def student_phase(
    teacher: Checkpoint,
    images: np.ndarray,
    cfg: DistillConfig,
    student: Checkpoint | None = None,
    seed: int = 0,
    teacher_logits: Tensor | None = None,
    loss_trace: list[float] | None = None,
) -> list[Checkpoint]:
    """
    Devuelve exactamente K checkpoints en orden de época (1 con checkpoint_epoch).

    El entrenamiento se detiene en la última época guardada: las épocas
    posteriores no afectan a ningún checkpoint devuelto. `loss_trace`, si se
    pasa, recibe L_θ evaluada antes de cada actualización.
    """
    if student is None:
        student = init_params(teacher.arch, seed, role=Role.STUDENT)
    if teacher_logits is None:
        teacher_logits = forward_logits(teacher, images)

    images = np.asarray(images, dtype=np.float32)
    graph = objective_graph(teacher.arch, Objective.DISTANCE, str(cfg.metric))
    optimizer = SgdOptimizer(momentum=cfg.student_momentum)
    store_at = cfg.checkpoint_epochs()
    params = dict(student.params)

    stored: list[Checkpoint] = []
    for epoch in range(1, max(store_at) + 1):
        try:
            loss, grads = loss_and_grad(graph, params, images, teacher_logits)
        except NonFiniteError as e:
            raise StudentDivergenceError(epoch, str(e)) from e
        if not math.isfinite(loss):
            raise StudentDivergenceError(epoch, f"L_θ={loss}")
        if loss_trace is not None:
            loss_trace.append(loss)

        params = optimizer.step(params, grads, cfg.eta)
        if epoch in store_at:
            stored.append(student.with_params(params, epoch=epoch, role=Role.STUDENT))

    logger.debug(f"student_phase: checkpoints en épocas {[c.meta.epoch for c in stored]}")
    return stored
