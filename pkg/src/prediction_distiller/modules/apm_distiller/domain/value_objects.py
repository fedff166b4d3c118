# src/prediction_distiller/modules/apm_distiller/domain/value_objects.py
"""
Value Objects de Destilación: métrica, estrategia de inicialización,
DistillConfig y procedencia del conjunto sintético.

Arquitectura: Modular Monolith
Capa: Domain
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import StrEnum
from typing import Any

from .exceptions import InvalidDistillConfigError

LOG_FLOOR = 1e-8


class Metric(StrEnum):
    MANHATTAN = "manhattan"
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"


class InitStrategy(StrEnum):
    RANDOM = "random"
    CONFIDENT = "confident"


@dataclass(frozen=True)
class DistillConfig:
    """
    Hiper-parámetros del bucle adversarial.

    | clave      | símbolo | significado                                   |
    |------------|---------|-----------------------------------------------|
    | rounds     | R       | rondas (iteraciones) de destilación           |
    | epochs     | E       | épocas del student por ronda                  |
    | checkpoints| K       | checkpoints del student usados en L_u         |
    | batch      | B       | mini-batch sintético por ronda (0 = todo S)   |
    | eta        | η       | learning rate del student                     |
    | gamma      | γ       | learning rate de las imágenes sintéticas      |
    | alpha      | α       | peso de la entropía cruzada del teacher       |
    | metric     | d       | manhattan | euclidean | cosine                |
    | segment    |         | muestras por bloque de gradiente (0 = B)      |

    Invariantes: 1 <= K <= E; η, γ > 0; α >= 0; segment <= B cuando B > 0.
    La cota B <= |S| se comprueba al resolver el batch contra un conjunto.
    """

    rounds: int = 500
    epochs: int = 50
    checkpoints: int = 5
    batch: int = 100
    eta: float = 0.01
    gamma: float = 0.1
    alpha: float = 0.1
    metric: Metric = Metric.MANHATTAN
    segment: int = 0
    seed: int = 0
    init: InitStrategy = InitStrategy.CONFIDENT
    log_floor: float = LOG_FLOOR
    student_momentum: float = 0.0
    checkpoint_epoch: int | None = None
    snapshot_every: int = 100
    log_every: int = 10

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "metric", Metric(self.metric))
            object.__setattr__(self, "init", InitStrategy(self.init))
        except ValueError as e:
            raise InvalidDistillConfigError(str(e)) from e

        checks = [
            (self.rounds >= 0, f"rounds debe ser >= 0: {self.rounds}"),
            (self.epochs >= 1, f"epochs debe ser >= 1: {self.epochs}"),
            (1 <= self.checkpoints <= self.epochs, f"se exige 1 <= K={self.checkpoints} <= E={self.epochs}"),
            (self.batch >= 0, f"batch debe ser >= 0: {self.batch}"),
            (self.segment >= 0, f"segment debe ser >= 0: {self.segment}"),
            (self.batch == 0 or self.segment <= self.batch, f"segment={self.segment} > B={self.batch}"),
            (self.eta > 0, f"eta debe ser > 0: {self.eta}"),
            (self.gamma > 0, f"gamma debe ser > 0: {self.gamma}"),
            (self.alpha >= 0, f"alpha debe ser >= 0: {self.alpha}"),
            (self.log_floor > 0, f"log_floor debe ser > 0: {self.log_floor}"),
            (0 <= self.student_momentum < 1, f"student_momentum fuera de [0,1): {self.student_momentum}"),
            (self.snapshot_every >= 1, f"snapshot_every debe ser >= 1: {self.snapshot_every}"),
            (self.log_every >= 1, f"log_every debe ser >= 1: {self.log_every}"),
            (
                self.checkpoint_epoch is None or 1 <= self.checkpoint_epoch <= self.epochs,
                f"checkpoint_epoch fuera de [1, E]: {self.checkpoint_epoch}",
            ),
        ]
        for ok, message in checks:
            if not ok:
                raise InvalidDistillConfigError(message)

    def batch_size(self, set_size: int) -> int:
        """B efectivo para un conjunto de `set_size` imágenes."""
        b = set_size if self.batch == 0 else self.batch
        if not 1 <= b <= set_size:
            raise InvalidDistillConfigError(f"B={b} fuera de [1, |S|={set_size}]")
        return b

    def segment_size(self, batch: int) -> int:
        return batch if self.segment == 0 else min(self.segment, batch)

    def checkpoint_epochs(self) -> list[int]:
        """
        Épocas e con e mod ⌊E/K⌋ = 0, las K primeras. Con checkpoint_epoch
        fijado, una sola época.
        """
        if self.checkpoint_epoch is not None:
            return [self.checkpoint_epoch]
        interval = self.epochs // self.checkpoints
        return [interval * k for k in range(1, self.checkpoints + 1)]

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["metric"] = str(self.metric)
        data["init"] = str(self.init)
        return data


@dataclass(frozen=True)
class Provenance:
    init_strategy: str = ""
    pool_hash: str = ""
    config_hash: str = ""
    rounds_completed: int = 0
    finalization_teacher_seed: int | None = None
    seed: int = 0
    parents: tuple[dict[str, Any], ...] = field(default_factory=tuple)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["parents"] = [dict(p) for p in self.parents]
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Provenance:
        data = dict(data)
        data["parents"] = tuple(data.get("parents", ()))
        return cls(**data)
