# src/prediction_distiller/modules/apm_distiller/application/distill.py
"""
Bucle completo de destilación por emparejamiento adversarial de predicciones.

Arquitectura: Application Layer
Responsabilidad: R rondas secuenciales de {muestrear teacher; student nuevo;
mini-batch de B; fase del student; actualización de u} y finalización con
los logits del teacher designado (primer miembro del pool).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from prediction_distiller.infrastructure.observability import current_telemetry, measure_latency
from prediction_distiller.modules.apm_distiller.application.student_phase import student_phase
from prediction_distiller.modules.apm_distiller.application.synthetic_update import (
    init_synthetic,
    update_synthetic,
)
from prediction_distiller.modules.apm_distiller.domain.entities import SyntheticSet
from prediction_distiller.modules.apm_distiller.domain.exceptions import (
    InvalidDistillConfigError,
    SyntheticSetError,
)
from prediction_distiller.modules.apm_distiller.domain.ports import DistilledStore, MetricsSink
from prediction_distiller.modules.apm_distiller.domain.value_objects import DistillConfig
from prediction_distiller.modules.data_pipeline import LabeledDataset
from prediction_distiller.modules.nn_models import forward_logits
from prediction_distiller.modules.teacher_factory import TeacherPool, pool_hash, sample_teacher

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RoundMetrics:
    round: int
    teacher_seed: int
    l_theta_first: float
    l_theta_last: float
    l_u: float
    mean_distances: tuple[float, ...]
    elapsed_sec: float

    def as_row(self) -> dict[str, Any]:
        row: dict[str, Any] = {
            "round": self.round,
            "teacher_seed": self.teacher_seed,
            "l_theta_first": self.l_theta_first,
            "l_theta_last": self.l_theta_last,
            "l_u": self.l_u,
        }
        for k, d in enumerate(self.mean_distances, start=1):
            row[f"d_ckpt_{k}"] = d
        row["elapsed_sec"] = self.elapsed_sec
        return row


@dataclass
class DistillResult:
    synset: SyntheticSet
    metrics: list[RoundMetrics] = field(default_factory=list)


def finalize(synset: SyntheticSet, pool: TeacherPool) -> SyntheticSet:
    """v_i = f_T(u_i) con el primer teacher del pool (orden de manifest)."""
    teacher = pool.teachers[0]
    synset.finalize(forward_logits(teacher, synset.images), teacher.meta.seed)
    return synset


class Distiller:
    """Caso de uso de destilación con snapshots reanudables y sumidero de métricas."""

    def __init__(
        self,
        store: DistilledStore | None = None,
        metrics_sink: MetricsSink | None = None,
        threads: int = 1,
    ):
        self.store = store
        self.metrics_sink = metrics_sink
        self.threads = max(1, threads)

    def _prepare(
        self,
        dataset: LabeledDataset,
        pool: TeacherPool,
        cfg: DistillConfig,
        ipc: int,
        resume: SyntheticSet | None,
    ) -> SyntheticSet:
        if resume is None:
            return init_synthetic(
                dataset, ipc, pool.teachers[0], cfg.init, np.random.default_rng(cfg.seed)
            )
        if resume.ipc != ipc or resume.num_classes != dataset.num_classes:
            raise SyntheticSetError(
                f"Snapshot incompatible: ipc={resume.ipc}, clases={resume.num_classes}"
            )
        if resume.image_shape != dataset.image_shape:
            raise SyntheticSetError(f"Snapshot con imágenes {resume.image_shape}")
        synset = resume.copy()
        synset.soft_labels = None
        return synset

    @measure_latency("distill.run")
    def run(
        self,
        dataset: LabeledDataset,
        pool: TeacherPool,
        cfg: DistillConfig,
        ipc: int,
        config_hash: str = "",
        snapshot_path: Path | None = None,
        resume: SyntheticSet | None = None,
    ) -> DistillResult:
        synset = self._prepare(dataset, pool, cfg, ipc, resume)
        synset.provenance = replace(
            synset.provenance,
            pool_hash=pool_hash(pool),
            config_hash=config_hash,
            seed=cfg.seed,
        )
        batch = cfg.batch_size(len(synset))
        if cfg.segment > batch:
            raise InvalidDistillConfigError(f"segment={cfg.segment} > B={batch}")

        start = synset.provenance.rounds_completed
        telemetry = current_telemetry("distill")
        metrics: list[RoundMetrics] = []
        started = time.perf_counter()

        for r in range(start, cfg.rounds):
            # RNG por ronda: reanudar desde un snapshot reproduce la misma secuencia
            rng = np.random.default_rng((cfg.seed, r + 1))
            teacher = sample_teacher(pool, rng)
            student_seed = int(rng.integers(2**31))
            indices = np.sort(rng.choice(len(synset), size=batch, replace=False))

            trace: list[float] = []
            students = student_phase(
                teacher, synset.images[indices], cfg, seed=student_seed, loss_trace=trace
            )
            update = update_synthetic(
                teacher, students, synset, indices, cfg, threads=self.threads
            )
            synset.provenance = replace(synset.provenance, rounds_completed=r + 1)

            row = RoundMetrics(
                round=r + 1,
                teacher_seed=teacher.meta.seed,
                l_theta_first=trace[0],
                l_theta_last=trace[-1],
                l_u=update.loss,
                mean_distances=update.mean_distances,
                elapsed_sec=round(time.perf_counter() - started, 3),
            )
            metrics.append(row)

            if (r + 1) % cfg.log_every == 0 or r + 1 == cfg.rounds:
                telemetry.emit("round", row.as_row())
            if self.store is not None and snapshot_path is not None and (r + 1) % cfg.snapshot_every == 0:
                self.store.save(synset, snapshot_path)
                logger.info(f"Snapshot en la ronda {r + 1}: {snapshot_path}")

        finalize(synset, pool)
        if self.metrics_sink is not None:
            self.metrics_sink.write([m.as_row() for m in metrics])
        return DistillResult(synset=synset, metrics=metrics)


def distill(
    dataset: LabeledDataset,
    pool: TeacherPool,
    cfg: DistillConfig,
    ipc: int,
    threads: int = 1,
    config_hash: str = "",
    resume: SyntheticSet | None = None,
) -> SyntheticSet:
    """Atajo sin persistencia: devuelve el conjunto finalizado."""
    return Distiller(threads=threads).run(dataset, pool, cfg, ipc, config_hash, resume=resume).synset
