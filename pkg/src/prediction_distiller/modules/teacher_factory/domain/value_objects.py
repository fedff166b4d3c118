# src/prediction_distiller/modules/teacher_factory/domain/value_objects.py
"""
Hiper-parámetros de entrenamiento de teachers.

Arquitectura: Domain Layer
Responsabilidad: Receta documentada (SGD, momentum 0.9, weight decay 5e-4,
coseno) y piso de convergencia. Se registra en el manifest del pool.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

from prediction_distiller.core.value_objects import require_non_negative, require_positive


@dataclass(frozen=True)
class TrainingHyperParams:
    epochs: int = 30
    batch_size: int = 128
    learning_rate: float = 0.01
    momentum: float = 0.9
    weight_decay: float = 5e-4
    convergence_floor: float = 0.95

    def __post_init__(self) -> None:
        require_non_negative("epochs", self.epochs)
        require_positive("batch_size", self.batch_size)
        require_positive("learning_rate", self.learning_rate)
        require_non_negative("momentum", self.momentum)
        require_non_negative("weight_decay", self.weight_decay)
        if not 0.0 <= self.convergence_floor <= 1.0:
            raise ValueError(f"convergence_floor fuera de [0,1]: {self.convergence_floor}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TrainingHyperParams:
        return cls(**data)
