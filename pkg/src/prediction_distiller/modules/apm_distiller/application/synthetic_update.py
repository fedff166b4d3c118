# src/prediction_distiller/modules/apm_distiller/application/synthetic_update.py
"""
Inicialización y actualización de las imágenes sintéticas.

Arquitectura: Application Layer
Responsabilidad:
    - init_synthetic: reales estratificados al azar o los más confiables
      para el teacher.
    - update_synthetic: u_i <- u_i - γ·∇_{u_i} L_u / B, calculado por bloques
      de `segment` muestras (opcionalmente en hilos).
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from prediction_distiller.modules.apm_distiller.application.adversarial import (
    SYNTHETIC_INPUT,
    AdversarialGraph,
    Reduction,
    adversarial_graph,
    model_bindings,
    sample_bindings,
)
from prediction_distiller.modules.apm_distiller.domain.entities import SyntheticSet
from prediction_distiller.modules.apm_distiller.domain.exceptions import (
    SyntheticDivergenceError,
)
from prediction_distiller.modules.apm_distiller.domain.value_objects import (
    DistillConfig,
    InitStrategy,
    Provenance,
)
from prediction_distiller.modules.data_pipeline import (
    InsufficientClassError,
    LabeledDataset,
    stratified_indices,
)
from prediction_distiller.modules.nn_models import Checkpoint, forward_logits, softmax_rows
from prediction_distiller.modules.tensor_core import GraphRunner, NonFiniteError, Tensor

logger = logging.getLogger(__name__)


def confident_indices(
    dataset: LabeledDataset, ipc: int, teacher: Checkpoint
) -> np.ndarray:
    """Por clase ascendente, los `ipc` reales con mayor p(y|x; θ^T). Orden estable."""
    counts = dataset.class_counts()
    short = [c for c in range(dataset.num_classes) if counts[c] < ipc]
    if short:
        raise InsufficientClassError(f"Clases con menos de {ipc} miembros: {short}")

    probs = softmax_rows(forward_logits(teacher, dataset.images))
    chosen = []
    for c in range(dataset.num_classes):
        members = np.flatnonzero(dataset.labels == c)
        order = np.argsort(-probs[members, c], kind="stable")
        chosen.append(members[order[:ipc]])
    return np.concatenate(chosen).astype(np.int64)


def init_synthetic(
    dataset: LabeledDataset,
    ipc: int,
    teacher: Checkpoint | None,
    strategy: InitStrategy | str,
    rng: np.random.Generator,
) -> SyntheticSet:
    strategy = InitStrategy(strategy)
    if strategy is InitStrategy.RANDOM:
        indices = stratified_indices(dataset.labels, dataset.num_classes, ipc, rng)
    else:
        if teacher is None:
            raise ValueError("La estrategia 'confident' requiere un teacher")
        indices = confident_indices(dataset, ipc, teacher)

    logger.info(f"Conjunto sintético inicializado ({strategy}): {len(indices)} imágenes")
    return SyntheticSet(
        images=dataset.images[indices],
        labels=dataset.labels[indices],
        num_classes=dataset.num_classes,
        ipc=ipc,
        provenance=Provenance(init_strategy=str(strategy)),
    )


@dataclass(frozen=True)
class UpdateResult:
    """Estadísticos del paso, evaluados antes de actualizar."""

    loss: float
    mean_distances: tuple[float, ...]


@dataclass(frozen=True)
class _SegmentResult:
    loss: float
    grad: Tensor
    distance_sums: np.ndarray


def _locate_divergence(
    adv: AdversarialGraph, models: dict[str, Tensor], images: np.ndarray, labels: np.ndarray, indices: np.ndarray
) -> int:
    """Reevalúa muestra por muestra para reportar el índice que diverge."""
    for j in range(len(indices)):
        runner = GraphRunner(adv.graph)
        try:
            runner.forward({**models, **sample_bindings(images[j : j + 1], labels[j : j + 1])})
            runner.backward([SYNTHETIC_INPUT])
        except NonFiniteError:
            return int(indices[j])
    return int(indices[0])


def _segment_gradient(
    adv: AdversarialGraph,
    models: dict[str, Tensor],
    images: np.ndarray,
    labels: np.ndarray,
    indices: np.ndarray,
) -> _SegmentResult:
    runner = GraphRunner(adv.graph)
    try:
        out = runner.forward({**models, **sample_bindings(images, labels)})
        grad = runner.backward([SYNTHETIC_INPUT])[SYNTHETIC_INPUT]
    except NonFiniteError as e:
        raise SyntheticDivergenceError(
            _locate_divergence(adv, models, images, labels, indices), str(e)
        ) from e
    sums = np.array([float(runner.value(n).sum()) for n in adv.distance_nodes])
    return _SegmentResult(float(np.asarray(out).reshape(())), grad, sums)


def update_synthetic(
    teacher: Checkpoint,
    students: Sequence[Checkpoint],
    synset: SyntheticSet,
    indices: np.ndarray,
    cfg: DistillConfig,
    gamma: float | None = None,
    threads: int = 1,
) -> UpdateResult:
    """
    Un paso de ascenso adversarial sobre los slots `indices` de u. El
    gradiente de cada muestra se normaliza por B = len(indices), de modo que
    el resultado no depende del tamaño de segmento.
    """
    indices = np.asarray(indices, dtype=np.int64)
    step = cfg.gamma if gamma is None else gamma
    if step < 0:
        raise ValueError(f"gamma debe ser >= 0: {step}")
    batch = len(indices)
    if batch == 0:
        return UpdateResult(0.0, tuple(0.0 for _ in students))

    adv = adversarial_graph(
        teacher.arch, len(students), cfg.metric, float(cfg.alpha), cfg.log_floor, Reduction.MEAN
    )
    models = model_bindings(teacher, students)
    segment = cfg.segment_size(batch)
    images = synset.images[indices]
    labels = synset.labels[indices]
    spans = [(s, min(s + segment, batch)) for s in range(0, batch, segment)]

    def work(span: tuple[int, int]) -> _SegmentResult:
        lo, hi = span
        return _segment_gradient(adv, models, images[lo:hi], labels[lo:hi], indices[lo:hi])

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(work, spans))
    else:
        results = [work(span) for span in spans]

    grad = np.concatenate([r.grad for r in results])
    if step != 0:
        synset.apply_update(indices, images - (step / batch) * grad)

    loss = sum(r.loss for r in results) / batch
    distances = sum(r.distance_sums for r in results) / batch
    return UpdateResult(loss=float(loss), mean_distances=tuple(float(d) for d in distances))
