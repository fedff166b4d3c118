# src/prediction_distiller/modules/eval_harness/application/ranking.py
"""
Ranking de arquitecturas con conjuntos destilados como proxy.

Arquitectura: Application Layer
Responsabilidad:
    - spearman: correlación de rangos (empates con rango promedio).
    - nas_rank: ground truth por entrenamiento con el dataset completo frente a
      precisión tras entrenar con S; devuelve ambas listas y ρ.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import replace

import numpy as np
from scipy.stats import rankdata

from prediction_distiller.core.exceptions import NumericDivergenceError
from prediction_distiller.infrastructure.observability import measure_latency
from prediction_distiller.modules.apm_distiller import SyntheticSet
from prediction_distiller.modules.data_pipeline import LabeledDataset
from prediction_distiller.modules.eval_harness.application.evaluation import (
    EvalSettings,
    train_on_distilled,
)
from prediction_distiller.modules.eval_harness.domain.exceptions import (
    InvalidScoresError,
    PartialStudyError,
)
from prediction_distiller.modules.eval_harness.domain.value_objects import RankingStudy
from prediction_distiller.modules.nn_models import (
    ArchSpec,
    InvalidArchitectureError,
    ModelError,
    NormKind,
    accuracy,
)
from prediction_distiller.modules.teacher_factory import TrainingHyperParams, train_teacher

logger = logging.getLogger(__name__)

MIN_FAMILY_SIZE = 5
NAS_WIDTHS = (8, 16, 32, 64)
NAS_DEPTHS = (1, 2, 3)


def spearman_details(scores_a: Sequence[float], scores_b: Sequence[float]) -> tuple[float, bool]:
    """(ρ, degenerate). Si algún lado no tiene varianza de rangos, ρ = 0 y degenerate."""
    if len(scores_a) != len(scores_b):
        raise InvalidScoresError(f"Longitudes distintas: {len(scores_a)} vs {len(scores_b)}")
    if len(scores_a) < 2:
        raise InvalidScoresError("spearman requiere al menos 2 puntuaciones")

    ra = rankdata(np.asarray(scores_a, dtype=np.float64), method="average")
    rb = rankdata(np.asarray(scores_b, dtype=np.float64), method="average")
    da = ra - ra.mean()
    db = rb - rb.mean()
    denom = float(np.sqrt((da * da).sum() * (db * db).sum()))
    if denom == 0.0:
        return 0.0, True
    rho = float((da * db).sum() / denom)
    return float(np.clip(rho, -1.0, 1.0)), False


def spearman(scores_a: Sequence[float], scores_b: Sequence[float]) -> float:
    return spearman_details(scores_a, scores_b)[0]


def default_nas_family(
    input_shape: tuple[int, int, int], num_classes: int, norm: NormKind | str = NormKind.INSTANCE
) -> list[ArchSpec]:
    """ConvNets ancho {8,16,32,64} × profundidad {1,2,3}; omite profundidades que la entrada no admite."""
    family = []
    for depth in NAS_DEPTHS:
        for width in NAS_WIDTHS:
            try:
                family.append(ArchSpec.convnet(depth, width, input_shape, num_classes, norm))
            except InvalidArchitectureError:
                logger.debug(f"Profundidad {depth} omitida para la entrada {input_shape}")
                break
    return family


@measure_latency("evaluation.nas_rank")
def nas_rank(
    family: Sequence[ArchSpec],
    synset: SyntheticSet,
    full_train: LabeledDataset,
    test: LabeledDataset,
    proxy_epochs: int,
    gt_epochs: int,
    seeds: Sequence[int],
    settings: EvalSettings | None = None,
    gt_hyper_params: TrainingHyperParams | None = None,
) -> RankingStudy:
    """
    ground truth: precisión media de test tras `gt_epochs` con el dataset
    completo (CE dura). proxy: precisión media tras `proxy_epochs` sobre S.
    Un fallo en cualquier miembro rechaza el estudio completo.
    """
    if len(family) < MIN_FAMILY_SIZE:
        raise InvalidScoresError(f"La familia requiere al menos {MIN_FAMILY_SIZE} arquitecturas: {len(family)}")
    if not seeds:
        raise InvalidScoresError("nas_rank requiere al menos una semilla")

    base = settings or EvalSettings()
    hp = replace(gt_hyper_params or TrainingHyperParams(), epochs=gt_epochs, convergence_floor=0.0)

    ground_truth: list[float] = []
    proxy: list[float] = []
    for arch in family:
        gt_accs: list[float] = []
        proxy_accs: list[float] = []
        try:
            for seed in seeds:
                teacher = train_teacher(full_train, arch, hp, seed)
                gt_accs.append(accuracy(teacher, test.images, test.labels))
                student = train_on_distilled(
                    synset, arch, proxy_epochs, seed,
                    base.label_mode, base.learning_rate, base.metric, base.batch_size,
                )
                proxy_accs.append(accuracy(student, test.images, test.labels))
        except (ModelError, NumericDivergenceError) as e:
            raise PartialStudyError(f"{arch.name}: {type(e).__name__}: {e}") from e
        ground_truth.append(float(np.mean(gt_accs)))
        proxy.append(float(np.mean(proxy_accs)))
        logger.info(f"NAS {arch.name}: gt={ground_truth[-1]:.4f} proxy={proxy[-1]:.4f}")

    rho, degenerate = spearman_details(ground_truth, proxy)
    if degenerate:
        logger.warning("Ranking degenerado: sin varianza en ground truth o proxy (ρ=0)")
    return RankingStudy(tuple(family), tuple(ground_truth), tuple(proxy), rho, degenerate)
