# src/prediction_distiller/modules/eval_harness/domain/value_objects.py
"""
Value Objects de Evaluación: EvalReport, RankingStudy y filas de estudio.

Arquitectura: Modular Monolith
Capa: Domain
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np

from prediction_distiller.modules.nn_models import ArchSpec, Objective

from .exceptions import InvalidScoresError

AGGREGATE_TOLERANCE = 1e-9


class LabelMode(StrEnum):
    SOFT_D = "soft-d"
    SOFT_CE = "soft-ce"
    HARD = "hard"

    @property
    def objective(self) -> Objective:
        return Objective(self.value)

    @property
    def needs_soft_labels(self) -> bool:
        return self is not LabelMode.HARD


def aggregate(values: list[float]) -> tuple[float, float]:
    """Media y desviación poblacional (ddof=0): una sola semilla da std = 0."""
    arr = np.asarray(values, dtype=np.float64)
    return float(arr.mean()), float(arr.std())


@dataclass(frozen=True)
class EvalReport:
    """
    Invariantes:
    1. Al menos una precisión por semilla
    2. mean/std coinciden con el recálculo sobre `accuracies` (1e-9)
    """

    accuracies: tuple[float, ...]
    mean: float
    std: float
    seeds: tuple[int, ...]
    arch: str = ""
    label_mode: str = LabelMode.SOFT_D
    config_hash: str = ""
    provenance: dict[str, Any] = field(default_factory=dict)
    wall_time_sec: float = 0.0
    failures: tuple[dict[str, Any], ...] = ()

    def __post_init__(self) -> None:
        if len(self.accuracies) < 1:
            raise InvalidScoresError("EvalReport requiere al menos una semilla completada")
        mean, std = aggregate(list(self.accuracies))
        if abs(mean - self.mean) > AGGREGATE_TOLERANCE or abs(std - self.std) > AGGREGATE_TOLERANCE:
            raise InvalidScoresError(
                f"mean/std ({self.mean}, {self.std}) no coinciden con el recálculo ({mean}, {std})"
            )

    @classmethod
    def from_accuracies(cls, accuracies: list[float], seeds: list[int], **kwargs: Any) -> EvalReport:
        mean, std = aggregate(accuracies)
        return cls(tuple(accuracies), mean, std, tuple(seeds), **kwargs)

    @property
    def partial(self) -> bool:
        return bool(self.failures)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["accuracies"] = list(self.accuracies)
        data["seeds"] = list(self.seeds)
        data["failures"] = list(self.failures)
        data["partial"] = self.partial
        data["label_mode"] = str(self.label_mode)
        return data


@dataclass(frozen=True)
class RankingStudy:
    """Invariantes: listas de igual longitud; ρ en [-1, 1]."""

    family: tuple[ArchSpec, ...]
    ground_truth: tuple[float, ...]
    proxy: tuple[float, ...]
    rho: float
    degenerate: bool = False

    def __post_init__(self) -> None:
        if not len(self.family) == len(self.ground_truth) == len(self.proxy):
            raise InvalidScoresError("family, ground_truth y proxy deben tener igual longitud")
        if math.isnan(self.rho) or not -1.0 - 1e-12 <= self.rho <= 1.0 + 1e-12:
            raise InvalidScoresError(f"ρ fuera de [-1, 1]: {self.rho}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": [a.name for a in self.family],
            "ground_truth": list(self.ground_truth),
            "proxy": list(self.proxy),
            "rho": self.rho,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class StudyRow:
    setting: str
    mean: float
    std: float

    def as_row(self) -> dict[str, Any]:
        return {"setting": self.setting, "mean": self.mean, "std": self.std}


@dataclass
class StudyResult:
    name: str
    rows: list[StudyRow] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    traces: dict[str, list[tuple[int, float]]] = field(default_factory=dict)
