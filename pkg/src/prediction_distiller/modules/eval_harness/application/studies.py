# src/prediction_distiller/modules/eval_harness/application/studies.py
"""
Drivers de estudios (ablaciones, merge, sonda de gradiente, NAS).

Arquitectura: Application Layer
Responsabilidad: Cada driver destila las variantes de su barrido, las evalúa
con el protocolo común y devuelve filas (setting, mean, std) más un resumen.
La persistencia de resultados vive en infrastructure/report_writers.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from prediction_distiller.modules.apm_distiller import (
    DistillConfig,
    InitStrategy,
    Metric,
    SyntheticSet,
    distill,
)
from prediction_distiller.modules.data_pipeline import LabeledDataset
from prediction_distiller.modules.eval_harness.application.evaluation import (
    EvalSettings,
    evaluate,
    merge_distilled,
    random_subset_set,
)
from prediction_distiller.modules.eval_harness.application.probes import (
    DEFAULT_WINDOW,
    gradient_norm_trace,
    peak_to_median_ratio,
)
from prediction_distiller.modules.eval_harness.application.ranking import (
    default_nas_family,
    nas_rank,
)
from prediction_distiller.modules.eval_harness.domain.exceptions import InvalidStudyError
from prediction_distiller.modules.eval_harness.domain.value_objects import StudyResult, StudyRow
from prediction_distiller.modules.nn_models import ArchSpec
from prediction_distiller.modules.teacher_factory import TeacherPool, TrainingHyperParams

logger = logging.getLogger(__name__)

STUDY_NAMES = (
    "merge",
    "gradnorm",
    "ablate-K",
    "ablate-teachers",
    "ablate-B",
    "ablate-E",
    "ablate-alpha",
    "distance",
    "nas",
)

DEFAULT_SWEEPS: dict[str, tuple[Any, ...]] = {
    "merge": (1, 2, 3, 4, 5),
    "ablate-K": (1, 2, 5, 10),
    "ablate-teachers": (1, 2, 5, 10),
    "ablate-B": (50, 100),
    "ablate-E": (10, 20, 50),
    "ablate-alpha": (0.0, 0.01, 0.1, 1.0),
    "distance": ("manhattan", "euclidean", "cosine"),
}


@dataclass(frozen=True)
class StudyContext:
    """Todo lo que un estudio necesita: datos preprocesados, pool y recetas."""

    train: LabeledDataset
    test: LabeledDataset
    pool: TeacherPool
    distill_config: DistillConfig
    ipc: int
    settings: EvalSettings
    arch: ArchSpec
    threads: int = 1
    config_hash: str = ""

    def distill(self, cfg: DistillConfig, pool: TeacherPool | None = None) -> SyntheticSet:
        return distill(
            self.train, pool or self.pool, cfg, self.ipc, threads=self.threads, config_hash=self.config_hash
        )

    def evaluate_row(self, setting: str, synset: SyntheticSet, settings: EvalSettings | None = None) -> StudyRow:
        report = evaluate(
            synset, self.arch, self.test, settings or self.settings, self.threads, self.config_hash
        )
        logger.info(f"Estudio [{setting}]: {report.mean:.4f} ± {report.std:.4f}")
        return StudyRow(setting, report.mean, report.std)


def _sweep(
    name: str,
    ctx: StudyContext,
    values: Sequence[Any],
    variant: Callable[[Any], tuple[DistillConfig, TeacherPool, EvalSettings]],
) -> StudyResult:
    if not values:
        raise InvalidStudyError(f"El estudio {name} requiere al menos un valor")
    result = StudyResult(name=name, summary={"values": list(values)})
    for value in values:
        cfg, pool, settings = variant(value)
        result.rows.append(ctx.evaluate_row(f"{name.split('-')[-1]}={value}", ctx.distill(cfg, pool), settings))
    return result


def ablate_checkpoints(ctx: StudyContext, values: Sequence[int] = DEFAULT_SWEEPS["ablate-K"]) -> StudyResult:
    return _sweep(
        "ablate-K", ctx, values,
        lambda k: (replace(ctx.distill_config, checkpoints=int(k)), ctx.pool, ctx.settings),
    )


def ablate_teachers(ctx: StudyContext, values: Sequence[int] = DEFAULT_SWEEPS["ablate-teachers"]) -> StudyResult:
    usable = [n for n in values if n <= len(ctx.pool.teachers)]
    if len(usable) < len(values):
        logger.warning(f"Pool de {len(ctx.pool.teachers)} teachers: se omiten {sorted(set(values) - set(usable))}")
    return _sweep(
        "ablate-teachers", ctx, usable,
        lambda n: (ctx.distill_config, ctx.pool.subset(int(n)), ctx.settings),
    )


def ablate_batch(ctx: StudyContext, values: Sequence[int] = DEFAULT_SWEEPS["ablate-B"]) -> StudyResult:
    return _sweep(
        "ablate-B", ctx, values,
        lambda b: (replace(ctx.distill_config, batch=int(b), segment=0), ctx.pool, ctx.settings),
    )


def ablate_epochs(ctx: StudyContext, values: Sequence[int] = DEFAULT_SWEEPS["ablate-E"]) -> StudyResult:
    def variant(e: Any) -> tuple[DistillConfig, TeacherPool, EvalSettings]:
        e = int(e)
        cfg = replace(ctx.distill_config, epochs=e, checkpoints=min(ctx.distill_config.checkpoints, e))
        return cfg, ctx.pool, ctx.settings

    return _sweep("ablate-E", ctx, values, variant)


def ablate_alpha(ctx: StudyContext, values: Sequence[float] = DEFAULT_SWEEPS["ablate-alpha"]) -> StudyResult:
    return _sweep(
        "ablate-alpha", ctx, values,
        lambda a: (replace(ctx.distill_config, alpha=float(a)), ctx.pool, ctx.settings),
    )


def compare_distances(ctx: StudyContext, values: Sequence[str] = DEFAULT_SWEEPS["distance"]) -> StudyResult:
    """La métrica cambia en la destilación y en la evaluación soft-d."""

    def variant(m: Any) -> tuple[DistillConfig, TeacherPool, EvalSettings]:
        metric = Metric(m)
        return replace(ctx.distill_config, metric=metric), ctx.pool, replace(ctx.settings, metric=metric)

    result = _sweep("distance", ctx, values, variant)
    best = max(result.rows, key=lambda row: row.mean)
    result.summary["best"] = best.setting
    return result


def disjoint_partitions(
    dataset: LabeledDataset, parts: int, rng: np.random.Generator
) -> list[LabeledDataset]:
    """Reparte cada clase en `parts` trozos disjuntos; el trozo j junta el j-ésimo de cada clase."""
    chunks: list[list[np.ndarray]] = [[] for _ in range(parts)]
    for c in range(dataset.num_classes):
        members = rng.permutation(np.flatnonzero(dataset.labels == c))
        for j, piece in enumerate(np.array_split(members, parts)):
            chunks[j].append(piece)
    return [dataset.take(np.sort(np.concatenate(pieces))) for pieces in chunks]


def merge_study(ctx: StudyContext, values: Sequence[int] = DEFAULT_SWEEPS["merge"]) -> StudyResult:
    """
    Destila max(k) sub-lotes independientes, cada uno inicializado desde una
    partición disjunta del train (init aleatoria, semilla distinta), y evalúa
    la unión de los k primeros.
    """
    if not values or min(values) < 1:
        raise InvalidStudyError(f"merge requiere k >= 1: {list(values)}")
    n_parts = int(max(values))
    partitions = disjoint_partitions(ctx.train, n_parts, np.random.default_rng(ctx.distill_config.seed))
    smallest = min(int(p.class_counts().min()) for p in partitions)
    if smallest < ctx.ipc:
        raise InvalidStudyError(
            f"merge con {n_parts} sub-lotes deja {smallest} imágenes por clase en alguna partición (ipc={ctx.ipc})"
        )
    parts = [
        distill(
            partition,
            ctx.pool,
            replace(ctx.distill_config, seed=ctx.distill_config.seed + j, init=InitStrategy.RANDOM),
            ctx.ipc,
            threads=ctx.threads,
            config_hash=ctx.config_hash,
        )
        for j, partition in enumerate(partitions)
    ]
    result = StudyResult(name="merge", summary={"values": list(values), "sub_batch_ipc": ctx.ipc})
    for k in values:
        result.rows.append(ctx.evaluate_row(f"k={k}", merge_distilled(parts[: int(k)])))
    return result


def gradnorm_study(ctx: StudyContext, window: float = DEFAULT_WINDOW) -> StudyResult:
    """
    Compara la traza de ‖∇_θ ℓ(θ, S)‖ de un conjunto destilado con un único
    checkpoint en e* = E/2 frente al conjunto integrado con K checkpoints.
    """
    cfg = ctx.distill_config
    e_star = max(1, cfg.epochs // 2)
    variants = {
        f"ckpt@{e_star}": replace(cfg, checkpoint_epoch=e_star),
        f"K={cfg.checkpoints}": replace(cfg, checkpoint_epoch=None),
    }
    result = StudyResult(name="gradnorm", summary={"e_star": e_star, "window": window})
    for setting, variant in variants.items():
        synset = ctx.distill(variant)
        trace = gradient_norm_trace(
            synset, ctx.arch, cfg.epochs, ctx.settings.base_seed,
            ctx.settings.label_mode, cfg.eta, cfg.metric, ctx.settings.batch_size,
        )
        ratio = peak_to_median_ratio(trace, e_star, window)
        result.traces[setting] = trace
        result.rows.append(StudyRow(setting, ratio, 0.0))
        logger.info(f"Sonda de gradiente [{setting}]: pico/mediana = {ratio:.3f}")
    result.summary["ratios"] = {row.setting: row.mean for row in result.rows}
    return result


def nas_study(
    ctx: StudyContext,
    proxy_epochs: int | None = None,
    gt_epochs: int = 10,
    n_seeds: int = 3,
    gt_hyper_params: TrainingHyperParams | None = None,
) -> StudyResult:
    """ρ del proxy destilado frente al de un subconjunto aleatorio del mismo tamaño."""
    family = default_nas_family(ctx.arch.input_shape, ctx.arch.num_classes, ctx.arch.norm)
    seeds = [ctx.settings.base_seed + i for i in range(n_seeds)]
    epochs = proxy_epochs if proxy_epochs is not None else ctx.settings.epochs
    gt_hp = gt_hyper_params or ctx.pool.hyper_params

    proxies = {
        "distilled": ctx.distill(ctx.distill_config),
        "random-subset": random_subset_set(
            ctx.train, ctx.ipc, np.random.default_rng(ctx.distill_config.seed), ctx.pool.teachers[0]
        ),
    }
    result = StudyResult(name="nas", summary={"family": [a.name for a in family], "seeds": seeds})
    for setting, synset in proxies.items():
        study = nas_rank(
            family, synset, ctx.train, ctx.test, epochs, gt_epochs, seeds, ctx.settings, gt_hp
        )
        result.rows.append(StudyRow(setting, study.rho, 0.0))
        result.summary[setting] = study.to_dict()
    return result


def run_study(name: str, ctx: StudyContext, values: Sequence[Any] | None = None) -> StudyResult:
    """
    Despacha por nombre de sub-comando; `values` sustituye el barrido por
    defecto. gradnorm y nas no tienen barrido y rechazan `values`.
    """
    sweeps: dict[str, Callable[..., StudyResult]] = {
        "merge": merge_study,
        "ablate-K": ablate_checkpoints,
        "ablate-teachers": ablate_teachers,
        "ablate-B": ablate_batch,
        "ablate-E": ablate_epochs,
        "ablate-alpha": ablate_alpha,
        "distance": compare_distances,
    }
    if name in ("gradnorm", "nas"):
        if values is not None:
            raise InvalidStudyError(f"El estudio {name} no tiene barrido: no acepta valores ({list(values)})")
        return gradnorm_study(ctx) if name == "gradnorm" else nas_study(ctx)
    if name not in sweeps:
        raise InvalidStudyError(f"Estudio desconocido: {name}. Opciones: {', '.join(STUDY_NAMES)}")
    return sweeps[name](ctx) if values is None else sweeps[name](ctx, values)
