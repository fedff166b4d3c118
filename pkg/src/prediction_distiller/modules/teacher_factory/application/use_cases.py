# src/prediction_distiller/modules/teacher_factory/application/use_cases.py
"""
Casos de Uso de Teachers: entrenar, construir el pool y muestrear.

Arquitectura: Application Layer
Responsabilidad: Producir teachers convergidos (solo se persiste la época
final) y ofrecer acceso aleatorio uniforme durante la destilación.
"""

from __future__ import annotations

import hashlib
import logging
from collections.abc import Callable, Mapping
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

import numpy as np

from prediction_distiller.infrastructure.observability import measure_latency
from prediction_distiller.modules.data_pipeline import LabeledDataset
from prediction_distiller.modules.nn_models import (
    ArchSpec,
    Checkpoint,
    Objective,
    Role,
    SgdSchedule,
    accuracy,
    dataset_loss,
    init_params,
    objective_graph,
    prepare_targets,
    train_network,
)
from prediction_distiller.modules.teacher_factory.domain.entities import TeacherPool
from prediction_distiller.modules.teacher_factory.domain.exceptions import (
    EmptyPoolError,
    NotConvergedError,
    PoolBuildError,
)
from prediction_distiller.modules.teacher_factory.domain.ports import PoolStore
from prediction_distiller.modules.teacher_factory.domain.value_objects import (
    TrainingHyperParams,
)

logger = logging.getLogger(__name__)


def train_teacher(
    dataset: LabeledDataset,
    arch: ArchSpec,
    hp: TrainingHyperParams,
    seed: int,
    test: LabeledDataset | None = None,
    loss_trace: list[float] | None = None,
) -> Checkpoint:
    """
    SGD con momentum, weight decay y decaimiento coseno. Registra la precisión
    final de train (y de test si se provee) en meta. Con `loss_trace`, agrega
    la pérdida media sobre todo el train al cierre de cada época.
    """
    if len(dataset) == 0:
        raise EmptyPoolError("No se puede entrenar un teacher con un dataset vacío")

    initial = init_params(arch, seed, role=Role.TEACHER, dataset_tag=dataset.tag)
    schedule = SgdSchedule(
        epochs=hp.epochs,
        learning_rate=hp.learning_rate,
        batch_size=hp.batch_size,
        momentum=hp.momentum,
        weight_decay=hp.weight_decay,
        cosine=True,
    )
    on_epoch_end: Callable[[int, Mapping[str, Any]], None] | None = None
    if loss_trace is not None:
        graph = objective_graph(arch, Objective.HARD_CE)
        images = np.asarray(dataset.images, dtype=np.float32)
        targets = prepare_targets(Objective.HARD_CE, dataset.labels)

        def record_loss(epoch: int, params: Mapping[str, Any]) -> None:
            loss_trace.append(dataset_loss(graph, params, images, targets))

        on_epoch_end = record_loss

    trained = train_network(
        initial,
        dataset.images,
        dataset.labels,
        Objective.HARD_CE,
        schedule,
        seed=seed,
        on_epoch_end=on_epoch_end,
    )

    train_acc = accuracy(trained, dataset.images, dataset.labels)
    test_acc = accuracy(trained, test.images, test.labels) if test is not None else None
    logger.info(
        f"Teacher seed={seed}: train_acc={train_acc:.4f}"
        + (f" test_acc={test_acc:.4f}" if test_acc is not None else "")
    )
    return trained.with_params(
        trained.params, train_accuracy=train_acc, test_accuracy=test_acc
    )


class BuildTeacherPool:
    """
    Entrena n teachers con semillas base..base+n-1 y persiste el pool.
    Si algún miembro falla se escribe un manifest parcial y se aborta.
    """

    def __init__(self, store: PoolStore | None = None, threads: int = 1):
        self.store = store
        self.threads = max(1, threads)

    @measure_latency("teachers.build_pool")
    def execute(
        self,
        dataset: LabeledDataset,
        arch: ArchSpec,
        hp: TrainingHyperParams,
        n_teachers: int,
        base_seed: int = 0,
        test: LabeledDataset | None = None,
        out_dir: Path | None = None,
        config_hash: str = "",
    ) -> TeacherPool:
        if n_teachers < 1:
            raise EmptyPoolError(f"n_teachers debe ser >= 1: {n_teachers}")
        seeds = [base_seed + i for i in range(n_teachers)]

        def run(seed: int) -> Checkpoint:
            teacher = train_teacher(dataset, arch, hp, seed, test)
            acc = teacher.meta.train_accuracy or 0.0
            if acc < hp.convergence_floor:
                raise NotConvergedError(seed, acc, hp.convergence_floor)
            return teacher

        completed: list[Checkpoint] = []
        failures: list[dict[str, Any]] = []
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            futures = [(seed, executor.submit(run, seed)) for seed in seeds]
            for seed, future in futures:
                try:
                    completed.append(future.result())
                except Exception as e:
                    logger.error(f"Teacher seed={seed} falló: {type(e).__name__}: {e}")
                    failures.append({"seed": seed, "error": type(e).__name__, "message": str(e)})

        if failures:
            manifest = None
            if self.store is not None and out_dir is not None:
                manifest = self.store.save_partial(out_dir, completed, failures, config_hash)
            raise PoolBuildError(
                f"{len(failures)} de {n_teachers} teachers fallaron "
                f"(seeds {[f['seed'] for f in failures]})",
                manifest_path=manifest,
            )

        pool = TeacherPool(arch, tuple(completed), dataset.tag, hp)
        if self.store is not None and out_dir is not None:
            self.store.save(pool, out_dir, config_hash)
        return pool


def build_pool(
    dataset: LabeledDataset,
    arch: ArchSpec,
    hp: TrainingHyperParams,
    n_teachers: int,
    base_seed: int = 0,
    test: LabeledDataset | None = None,
    threads: int = 1,
) -> TeacherPool:
    """Construcción en memoria, sin persistencia."""
    return BuildTeacherPool(threads=threads).execute(
        dataset, arch, hp, n_teachers, base_seed, test
    )


def sample_teacher(pool: TeacherPool, rng: np.random.Generator) -> Checkpoint:
    if len(pool) == 0:
        raise EmptyPoolError("Pool vacío")
    return pool.sample(rng)


def pool_hash(pool: TeacherPool) -> str:
    """SHA-256 de los parámetros de todos los miembros, en orden de manifest."""
    hasher = hashlib.sha256()
    hasher.update(repr(pool.arch.to_dict()).encode())
    for teacher in pool.teachers:
        hasher.update(str(teacher.meta.seed).encode())
        for name, value in teacher.params.items():
            hasher.update(name.encode())
            hasher.update(np.ascontiguousarray(value, dtype="<f4").tobytes())
    return hasher.hexdigest()
