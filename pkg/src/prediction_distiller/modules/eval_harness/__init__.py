# src/prediction_distiller/modules/eval_harness/__init__.py
"""
Módulo eval-harness: protocolo de re-entrenamiento, acuerdo de predicciones,
merge, sonda de gradiente, ranking NAS y drivers de estudios.
"""

from __future__ import annotations

from .application.evaluation import (
    EvalSettings,
    evaluate,
    merge_distilled,
    prediction_agreement,
    random_subset_set,
    train_on_distilled,
    training_targets,
)
from .application.probes import DEFAULT_WINDOW, gradient_norm_trace, peak_to_median_ratio
from .application.ranking import (
    MIN_FAMILY_SIZE,
    default_nas_family,
    nas_rank,
    spearman,
    spearman_details,
)
from .application.studies import (
    DEFAULT_SWEEPS,
    STUDY_NAMES,
    StudyContext,
    ablate_alpha,
    ablate_batch,
    ablate_checkpoints,
    ablate_epochs,
    ablate_teachers,
    compare_distances,
    disjoint_partitions,
    gradnorm_study,
    merge_study,
    nas_study,
    run_study,
)
from .domain.exceptions import (
    AllSeedsFailedError,
    EmptySyntheticSetError,
    EvaluationError,
    IncompatibleSetsError,
    InvalidScoresError,
    InvalidStudyError,
    PartialStudyError,
)
from .domain.value_objects import (
    EvalReport,
    LabelMode,
    RankingStudy,
    StudyResult,
    StudyRow,
    aggregate,
)
from .infrastructure.report_writers import (
    write_eval_report,
    write_json,
    write_study,
    write_trace_csv,
)

__all__ = [
    "DEFAULT_SWEEPS",
    "DEFAULT_WINDOW",
    "MIN_FAMILY_SIZE",
    "STUDY_NAMES",
    "AllSeedsFailedError",
    "EmptySyntheticSetError",
    "EvalReport",
    "EvalSettings",
    "EvaluationError",
    "IncompatibleSetsError",
    "InvalidScoresError",
    "InvalidStudyError",
    "LabelMode",
    "PartialStudyError",
    "RankingStudy",
    "StudyContext",
    "StudyResult",
    "StudyRow",
    "ablate_alpha",
    "ablate_batch",
    "ablate_checkpoints",
    "ablate_epochs",
    "ablate_teachers",
    "aggregate",
    "compare_distances",
    "default_nas_family",
    "disjoint_partitions",
    "evaluate",
    "gradient_norm_trace",
    "gradnorm_study",
    "merge_distilled",
    "merge_study",
    "nas_rank",
    "nas_study",
    "peak_to_median_ratio",
    "prediction_agreement",
    "random_subset_set",
    "run_study",
    "spearman",
    "spearman_details",
    "train_on_distilled",
    "training_targets",
    "write_eval_report",
    "write_json",
    "write_study",
    "write_trace_csv",
]
