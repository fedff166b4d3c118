# src/prediction_distiller/modules/orchestration/application/use_cases.py
"""
Casos de Uso de Orquestación: un método por sub-comando de la CLI.

Arquitectura: Application Layer
Responsabilidad: Ensamblar datos preprocesados, pool, destilador y
evaluación a partir de un RunConfig, y sellar cada artefacto con su hash.
"""

from __future__ import annotations

import logging
import os
from collections.abc import Sequence
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path
from typing import Any

import numpy as np

from prediction_distiller.modules.apm_distiller import (
    ApmsDistilledStore,
    CsvMetricsSink,
    Distiller,
    DistilledStore,
    SyntheticSet,
    load_distilled,
)
from prediction_distiller.modules.data_pipeline import LabeledDataset, Preprocessor, export_grid
from prediction_distiller.modules.eval_harness import (
    EvalReport,
    StudyContext,
    evaluate,
    run_study,
    write_eval_report,
    write_study,
)
from prediction_distiller.modules.nn_models import ArchSpec
from prediction_distiller.modules.orchestration.domain.exceptions import ArtifactMismatchError
from prediction_distiller.modules.orchestration.domain.value_objects import RunConfig
from prediction_distiller.modules.orchestration.infrastructure.artifacts import embedded_config_hash
from prediction_distiller.modules.orchestration.infrastructure.datasets import load_datasets
from prediction_distiller.modules.teacher_factory import (
    MANIFEST_NAME,
    BuildTeacherPool,
    DirectoryPoolStore,
    PoolStore,
    TeacherPool,
)

logger = logging.getLogger(__name__)

OUT_DIR_ENV = "APM_OUT_DIR"
DEFAULT_OUT_DIR = "runs"


@dataclass(frozen=True)
class PreparedData:
    train: LabeledDataset
    test: LabeledDataset
    preprocessor: Preprocessor


@dataclass(frozen=True)
class DistillOutcome:
    path: Path
    metrics_path: Path
    synset: SyntheticSet


def resolve_out_dir(config: RunConfig) -> Path:
    """Prioridad: [run].out_dir, luego APM_OUT_DIR, luego ./runs."""
    return Path(config.run.out_dir or os.environ.get(OUT_DIR_ENV) or DEFAULT_OUT_DIR)


def prepare_data(config: RunConfig) -> PreparedData:
    """Carga train/test y ajusta el preprocesado SOLO sobre train."""
    train, test = load_datasets(config.dataset)
    pre = config.preprocessing
    preprocessor = Preprocessor.fit(train, pre.zca, pre.zca_eps, pre.normalize)
    return PreparedData(preprocessor.apply(train), preprocessor.apply(test), preprocessor)


class ExperimentWorkflow:
    """
    El Director de Orquesta de una corrida.
    Coordina data-pipeline, teacher-factory, apm-distiller y eval-harness.
    """

    def __init__(
        self,
        config: RunConfig,
        pool_store: PoolStore | None = None,
        distilled_store: DistilledStore | None = None,
        threads: int | None = None,
        out_dir: Path | None = None,
    ):
        # Inyección de Dependencias (DIP)
        self.config = config
        self.pool_store = pool_store or DirectoryPoolStore()
        self.distilled_store = distilled_store or ApmsDistilledStore()
        self.threads = threads if threads is not None else config.run.threads
        self.out_dir = Path(out_dir) if out_dir is not None else resolve_out_dir(config)
        self.config_hash = config.config_hash

    @cached_property
    def data(self) -> PreparedData:
        return prepare_data(self.config)

    def arch_for(self, image_shape: tuple[int, ...], num_classes: int, override: str | None = None) -> ArchSpec:
        section = self.config.arch.override(override) if override else self.config.arch
        return section.to_arch(tuple(image_shape), num_classes)  # type: ignore[arg-type]

    # --- train-teachers ---
    def train_teachers(self, n: int | None = None, out_dir: Path | None = None) -> Path:
        directory = Path(out_dir) if out_dir is not None else self.out_dir / "teachers"
        train, test = self.data.train, self.data.test
        arch = self.arch_for(train.image_shape, train.num_classes)
        n_teachers = n if n is not None else self.config.teacher.n
        logger.info(f"Entrenando {n_teachers} teachers {arch.name} → {directory}")

        BuildTeacherPool(self.pool_store, self.threads).execute(
            train,
            arch,
            self.config.teacher.hyper_params(),
            n_teachers,
            base_seed=self.config.run.seed,
            test=test,
            out_dir=directory,
            config_hash=self.config_hash,
        )
        return directory / MANIFEST_NAME

    def load_pool(self, pool_dir: Path) -> TeacherPool:
        pool = self.pool_store.load(Path(pool_dir))
        if pool.dataset_tag != self.data.train.tag:
            logger.warning(f"El pool se entrenó sobre '{pool.dataset_tag}', el dataset actual es '{self.data.train.tag}'")
        return pool

    # --- distill ---
    def distill(
        self,
        pool_dir: Path,
        ipc: int | None = None,
        segment: int | None = None,
        out: Path | None = None,
        resume: Path | None = None,
    ) -> DistillOutcome:
        effective = self.config.with_overrides(ipc=ipc, segment=segment)
        ipc, cfg, config_hash = effective.ipc, effective.distill, effective.config_hash
        path = Path(out) if out is not None else self.out_dir / f"distilled_ipc{ipc}.apms"
        metrics_path = path.with_suffix(".metrics.csv")
        snapshot_path = path.with_suffix(".snapshot.apms")
        pool = self.load_pool(pool_dir)
        resume_from = self.distilled_store.load(Path(resume)) if resume is not None else None
        if resume_from is not None:
            logger.info(f"Reanudando desde {resume} (ronda {resume_from.provenance.rounds_completed})")

        distiller = Distiller(
            store=self.distilled_store,
            metrics_sink=CsvMetricsSink(metrics_path, config_hash),
            threads=self.threads,
        )
        result = distiller.run(
            self.data.train, pool, cfg, ipc, config_hash, snapshot_path=snapshot_path, resume=resume_from
        )
        self.distilled_store.save(result.synset, path)
        logger.info(f"Conjunto destilado |S|={len(result.synset)} guardado en {path}")
        return DistillOutcome(path, metrics_path, result.synset)

    # --- evaluate ---
    def evaluate(
        self,
        distilled: Path,
        arch: str | None = None,
        n_seeds: int | None = None,
        out: Path | None = None,
    ) -> tuple[EvalReport, Path]:
        synset = self.distilled_store.load(Path(distilled))
        spec = self.arch_for(synset.image_shape, synset.num_classes, arch)
        settings = self.config.eval_settings()
        if n_seeds is not None:
            settings = replace(settings, n_seeds=n_seeds)

        report = evaluate(synset, spec, self.data.test, settings, self.threads, self.config_hash)
        path = Path(out) if out is not None else Path(distilled).with_suffix(".eval.json")
        write_eval_report(report, path)
        return report, path

    # --- study ---
    def study(
        self,
        name: str,
        pool_dir: Path,
        ipc: int | None = None,
        values: Sequence[Any] | None = None,
        out_dir: Path | None = None,
    ) -> dict[str, Path]:
        pool = self.load_pool(pool_dir)
        effective = self.config.with_overrides(ipc=ipc)
        ctx = StudyContext(
            train=self.data.train,
            test=self.data.test,
            pool=pool,
            distill_config=effective.distill,
            ipc=effective.ipc,
            settings=self.config.eval_settings(),
            arch=pool.arch,
            threads=self.threads,
            config_hash=effective.config_hash,
        )
        result = run_study(name, ctx, values)
        directory = Path(out_dir) if out_dir is not None else self.out_dir / "studies"
        return write_study(result, directory, effective.config_hash)

    # --- export-grid ---
    def export_grid(self, distilled: Path, out: Path) -> Path:
        """Invierte el preprocesado de la corrida antes de escribir la grilla."""
        return export_distilled_grid(distilled, out, self.data.preprocessor)


def export_distilled_grid(distilled: Path, out: Path, preprocessor: Preprocessor | None = None) -> Path:
    synset = load_distilled(Path(distilled))
    images = preprocessor.invert_images(synset.images) if preprocessor is not None else synset.images
    return export_grid(images, Path(out), synset.labels)


@dataclass(frozen=True)
class VerifyResult:
    path: Path
    embedded_hash: str
    matches: bool


def verify_artifacts(config_hash: str, paths: Sequence[Path]) -> list[VerifyResult]:
    """Re-hash de la configuración frente al sello de cada artefacto."""
    results = []
    for path in paths:
        embedded = embedded_config_hash(Path(path))
        results.append(VerifyResult(Path(path), embedded, embedded == config_hash))
        logger.info(f"verify {path}: {'OK' if embedded == config_hash else 'MISMATCH'}")
    bad = [str(r.path) for r in results if not r.matches]
    if bad:
        raise ArtifactMismatchError(f"config_hash distinto de {config_hash[:12]} en: {', '.join(bad)}")
    return results


@dataclass(frozen=True)
class Comparison:
    same_shape: bool
    labels_equal: bool
    max_image_diff: float
    max_logit_diff: float
    atol: float

    @property
    def within_tolerance(self) -> bool:
        return (
            self.same_shape
            and self.labels_equal
            and self.max_image_diff <= self.atol
            and self.max_logit_diff <= self.atol
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "same_shape": self.same_shape,
            "labels_equal": self.labels_equal,
            "max_image_diff": self.max_image_diff,
            "max_logit_diff": self.max_logit_diff,
            "atol": self.atol,
            "within_tolerance": self.within_tolerance,
        }


def compare_distilled(a: Path, b: Path, atol: float = 1e-5) -> Comparison:
    """Comparación con tolerancia absoluta (p. ej. --segment 1 frente a --segment B)."""
    sa, sb = load_distilled(Path(a)), load_distilled(Path(b))
    same_shape = sa.images.shape == sb.images.shape and (
        (sa.soft_labels is None) == (sb.soft_labels is None)
    )
    if not same_shape:
        return Comparison(False, False, float("inf"), float("inf"), atol)

    labels_equal = bool(np.array_equal(sa.labels, sb.labels))
    image_diff = float(np.max(np.abs(sa.images - sb.images), initial=0.0))
    logit_diff = 0.0
    if sa.soft_labels is not None and sb.soft_labels is not None:
        logit_diff = float(np.max(np.abs(sa.soft_labels - sb.soft_labels), initial=0.0))
    return Comparison(True, labels_equal, image_diff, logit_diff, atol)
