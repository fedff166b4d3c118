# src/prediction_distiller/modules/apm_distiller/__init__.py
"""
Módulo apm-distiller: bucle adversarial, checkpoints del student,
actualización por segmentos y formato APMS.
"""

from __future__ import annotations

from .application.adversarial import (
    AdversarialGraph,
    Reduction,
    adversarial_graph,
    adversarial_loss,
)
from .application.distill import (
    DistillResult,
    Distiller,
    RoundMetrics,
    distill,
    finalize,
)
from .application.student_phase import student_phase
from .application.synthetic_update import (
    UpdateResult,
    confident_indices,
    init_synthetic,
    update_synthetic,
)
from .domain.distances import distance, row_distances
from .domain.entities import SyntheticSet
from .domain.exceptions import (
    ChecksumError,
    DistillationError,
    DistilledFormatError,
    InvalidDistillConfigError,
    NotFinalizedError,
    StudentDivergenceError,
    SyntheticDivergenceError,
    SyntheticSetError,
    UnknownMetricError,
)
from .domain.ports import DistilledStore, MetricsSink
from .domain.value_objects import LOG_FLOOR, DistillConfig, InitStrategy, Metric, Provenance
from .infrastructure.distilled_codec import ApmsDistilledStore, load_distilled, save_distilled
from .infrastructure.metrics_csv import CsvMetricsSink

__all__ = [
    "LOG_FLOOR",
    "AdversarialGraph",
    "ApmsDistilledStore",
    "ChecksumError",
    "CsvMetricsSink",
    "DistillConfig",
    "DistillResult",
    "DistillationError",
    "DistilledFormatError",
    "DistilledStore",
    "Distiller",
    "InitStrategy",
    "InvalidDistillConfigError",
    "Metric",
    "MetricsSink",
    "NotFinalizedError",
    "Provenance",
    "Reduction",
    "RoundMetrics",
    "StudentDivergenceError",
    "SyntheticDivergenceError",
    "SyntheticSet",
    "SyntheticSetError",
    "UnknownMetricError",
    "UpdateResult",
    "adversarial_graph",
    "adversarial_loss",
    "confident_indices",
    "distance",
    "distill",
    "finalize",
    "init_synthetic",
    "load_distilled",
    "row_distances",
    "save_distilled",
    "student_phase",
    "update_synthetic",
]
