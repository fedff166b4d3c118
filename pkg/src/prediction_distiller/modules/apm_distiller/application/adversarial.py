# src/prediction_distiller/modules/apm_distiller/application/adversarial.py
"""
Pérdida adversarial por muestra sobre imágenes sintéticas.

Arquitectura: Application Layer
Responsabilidad: Construir el grafo
    L_i = Σ_k -log(max(d(f_T(u_i), f_Sk(u_i)), ε)) + α·H(y_i, softmax(f_T(u_i)))
con teacher y K students como prefijos de parámetros (`teacher.`, `student{k}.`).
Cada término depende solo de u_i: no hay operaciones que mezclen muestras.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from functools import lru_cache
from typing import Any

import numpy as np

from prediction_distiller.modules.apm_distiller.domain.value_objects import LOG_FLOOR, Metric
from prediction_distiller.modules.nn_models import ArchSpec, Checkpoint, build_logits
from prediction_distiller.modules.tensor_core import Graph, GraphRunner, Tensor

SYNTHETIC_INPUT = "u"
LABEL_INPUT = "y"
TEACHER_PREFIX = "teacher."


def student_prefix(k: int) -> str:
    return f"student{k}."


class Reduction(StrEnum):
    """sum: Σ_k tal cual; mean: el término de distancia se divide por K."""

    SUM = "sum"
    MEAN = "mean"


@dataclass(frozen=True)
class AdversarialGraph:
    graph: Graph
    distance_nodes: tuple[int, ...]
    per_sample: int


@lru_cache(maxsize=32)
def adversarial_graph(
    arch: ArchSpec,
    checkpoints: int,
    metric: Metric,
    alpha: float,
    log_floor: float = LOG_FLOOR,
    reduction: Reduction = Reduction.SUM,
) -> AdversarialGraph:
    """Salida: Σ_i L_i sobre las muestras enlazadas en `u`."""
    g = Graph()
    u = g.input(SYNTHETIC_INPUT)
    teacher_logits = build_logits(g, arch, u, TEACHER_PREFIX)

    distances = []
    total: int | None = None
    for k in range(checkpoints):
        student_logits = build_logits(g, arch, u, student_prefix(k))
        d = g.distance(metric, teacher_logits, student_logits)
        distances.append(d)
        term = g.neg(g.log(g.clamp_min(d, log_floor)))
        total = term if total is None else g.add(total, term)
    assert total is not None

    if reduction is Reduction.MEAN and checkpoints > 1:
        total = g.scale(total, 1.0 / checkpoints)
    if alpha > 0:
        ce = g.cross_entropy(teacher_logits, g.input(LABEL_INPUT))
        total = g.add(total, g.scale(ce, alpha))

    g.set_output(g.sum(total))
    return AdversarialGraph(graph=g, distance_nodes=tuple(distances), per_sample=total)


def model_bindings(teacher: Checkpoint, students: Sequence[Checkpoint]) -> dict[str, Tensor]:
    bindings = teacher.bindings(TEACHER_PREFIX)
    for k, student in enumerate(students):
        bindings.update(student.bindings(student_prefix(k)))
    return bindings


def sample_bindings(images: np.ndarray, labels: np.ndarray) -> dict[str, Any]:
    return {
        SYNTHETIC_INPUT: np.asarray(images, dtype=np.float32),
        LABEL_INPUT: np.asarray(labels, dtype=np.int64),
    }


def adversarial_loss(
    teacher: Checkpoint,
    students: Sequence[Checkpoint],
    image: np.ndarray,
    label: int,
    metric: Metric | str,
    alpha: float,
    log_floor: float = LOG_FLOOR,
    reduction: Reduction = Reduction.SUM,
) -> float:
    """L_u de una sola imagen (C,H,W). Los students deben compartir la arquitectura del teacher."""
    if not students:
        raise ValueError("adversarial_loss requiere al menos un checkpoint de student")
    adv = adversarial_graph(
        teacher.arch, len(students), Metric(metric), float(alpha), log_floor, Reduction(reduction)
    )
    runner = GraphRunner(adv.graph)
    out = runner.forward(
        {**model_bindings(teacher, students), **sample_bindings(image[None], np.array([label]))}
    )
    return float(np.asarray(out, dtype=np.float64).reshape(()))
