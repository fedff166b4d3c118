# src/prediction_distiller/modules/eval_harness/application/evaluation.py
"""
Protocolo de evaluación de conjuntos destilados.

Arquitectura: Application Layer
Responsabilidad: Re-entrenar redes desde cero sobre S (n semillas), medir en
test y agregar. El baseline de subconjunto aleatorio usa el mismo camino.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from prediction_distiller.infrastructure.observability import measure_latency
from prediction_distiller.modules.apm_distiller import (
    Metric,
    Provenance,
    SyntheticSet,
    row_distances,
)
from prediction_distiller.modules.data_pipeline import LabeledDataset, stratified_indices
from prediction_distiller.modules.eval_harness.domain.exceptions import (
    AllSeedsFailedError,
    EmptySyntheticSetError,
    IncompatibleSetsError,
)
from prediction_distiller.modules.eval_harness.domain.value_objects import EvalReport, LabelMode
from prediction_distiller.modules.nn_models import (
    ArchSpec,
    Checkpoint,
    InputShapeError,
    Role,
    SgdSchedule,
    accuracy,
    forward_logits,
    init_params,
    train_network,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalSettings:
    """Entrenamiento de evaluación: SGD plano con decaimiento coseno."""

    epochs: int = 200
    learning_rate: float = 0.01
    batch_size: int = 0
    label_mode: LabelMode = LabelMode.SOFT_D
    metric: Metric = Metric.MANHATTAN
    n_seeds: int = 5
    base_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "label_mode", LabelMode(self.label_mode))
        object.__setattr__(self, "metric", Metric(self.metric))
        if self.n_seeds < 1:
            raise ValueError(f"n_seeds debe ser >= 1: {self.n_seeds}")

    @property
    def seeds(self) -> list[int]:
        return [self.base_seed + i for i in range(self.n_seeds)]


def training_targets(synset: SyntheticSet, arch: ArchSpec, mode: LabelMode) -> np.ndarray:
    if len(synset) == 0:
        raise EmptySyntheticSetError("El conjunto sintético no tiene imágenes")
    if synset.image_shape != arch.input_shape:
        raise InputShapeError(f"Imágenes {synset.image_shape} vs entrada {arch.input_shape}")
    if not mode.needs_soft_labels:
        return synset.labels
    v = synset.require_soft_labels()
    if v.shape[1] != arch.num_classes:
        raise IncompatibleSetsError(f"v con {v.shape[1]} logits para {arch.num_classes} clases")
    return v


def train_on_distilled(
    synset: SyntheticSet,
    arch: ArchSpec,
    epochs: int,
    seed: int,
    label_mode: LabelMode | str = LabelMode.SOFT_D,
    learning_rate: float = 0.01,
    metric: Metric | str = Metric.MANHATTAN,
    batch_size: int = 0,
) -> Checkpoint:
    """
    soft-d: minimiza d(f(u), v); soft-ce: CE contra softmax(v); hard: CE con y_u.
    Con epochs=0 devuelve la inicialización.
    """
    mode = LabelMode(label_mode)
    targets = training_targets(synset, arch, mode)
    initial = init_params(arch, seed, role=Role.STUDENT)
    schedule = SgdSchedule(epochs, learning_rate, batch_size=batch_size, cosine=True)
    return train_network(
        initial, synset.images, targets, mode.objective, schedule, seed, metric=str(Metric(metric))
    )


@measure_latency("evaluation.evaluate")
def evaluate(
    synset: SyntheticSet,
    arch: ArchSpec,
    test: LabeledDataset,
    settings: EvalSettings,
    threads: int = 1,
    config_hash: str = "",
) -> EvalReport:
    """Entrena `n_seeds` redes nuevas y agrega la precisión de test."""
    started = time.perf_counter()

    def run(seed: int) -> float:
        model = train_on_distilled(
            synset,
            arch,
            settings.epochs,
            seed,
            settings.label_mode,
            settings.learning_rate,
            settings.metric,
            settings.batch_size,
        )
        return accuracy(model, test.images, test.labels)

    seeds = settings.seeds
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        futures = [(seed, executor.submit(run, seed)) for seed in seeds]
        completed: list[tuple[int, float]] = []
        failures = []
        for seed, future in futures:
            try:
                completed.append((seed, future.result()))
            except Exception as e:
                logger.error(f"Evaluación seed={seed} falló: {type(e).__name__}: {e}")
                failures.append({"seed": seed, "error": type(e).__name__, "message": str(e)})

    if not completed:
        raise AllSeedsFailedError(f"Las {len(seeds)} semillas de evaluación fallaron: {failures}")

    report = EvalReport.from_accuracies(
        [acc for _, acc in completed],
        [seed for seed, _ in completed],
        arch=arch.name,
        label_mode=settings.label_mode,
        config_hash=config_hash,
        provenance=synset.provenance.to_dict(),
        wall_time_sec=round(time.perf_counter() - started, 3),
        failures=tuple(failures),
    )
    logger.info(f"Evaluación {arch.name}: {report.mean:.4f} ± {report.std:.4f} ({len(completed)} semillas)")
    return report


def prediction_agreement(
    a: Checkpoint, b: Checkpoint, data: LabeledDataset, metric: Metric | str = Metric.MANHATTAN
) -> float:
    """Media sobre `data` de d(f_a(x), f_b(x))."""
    if a.arch.input_shape != b.arch.input_shape:
        raise InputShapeError(f"Entradas distintas: {a.arch.input_shape} vs {b.arch.input_shape}")
    if len(data) == 0:
        return 0.0
    return float(np.mean(row_distances(metric, forward_logits(a, data.images), forward_logits(b, data.images))))


def merge_distilled(sets: Sequence[SyntheticSet]) -> SyntheticSet:
    """Concatena u/y/v. La procedencia lista a todos los padres."""
    if not sets:
        raise IncompatibleSetsError("merge_distilled requiere al menos un conjunto")
    if len(sets) == 1:
        return sets[0].copy()

    first = sets[0]
    for s in sets[1:]:
        if (s.image_shape, s.num_classes, s.finalized) != (first.image_shape, first.num_classes, first.finalized):
            raise IncompatibleSetsError("Los conjuntos no comparten forma, clases o finalización")

    soft = np.concatenate([s.require_soft_labels() for s in sets]) if first.finalized else None
    provenance = replace(
        first.provenance,
        rounds_completed=max(s.provenance.rounds_completed for s in sets),
        parents=tuple(s.provenance.to_dict() for s in sets),
    )
    return SyntheticSet(
        images=np.concatenate([s.images for s in sets]),
        labels=np.concatenate([s.labels for s in sets]),
        num_classes=first.num_classes,
        ipc=sum(s.ipc for s in sets),
        soft_labels=soft,
        provenance=provenance,
    )


def random_subset_set(
    dataset: LabeledDataset,
    ipc: int,
    rng: np.random.Generator,
    teacher: Checkpoint | None = None,
) -> SyntheticSet:
    """
    Baseline de subconjunto real estratificado con la forma de un SyntheticSet.
    Con `teacher`, se añaden sus logits como v (para los modos soft).
    """
    indices = stratified_indices(dataset.labels, dataset.num_classes, ipc, rng)
    synset = SyntheticSet(
        images=dataset.images[indices],
        labels=dataset.labels[indices],
        num_classes=dataset.num_classes,
        ipc=ipc,
        provenance=Provenance(init_strategy="random-subset"),
    )
    if teacher is not None:
        synset.finalize(forward_logits(teacher, synset.images), teacher.meta.seed)
    return synset
