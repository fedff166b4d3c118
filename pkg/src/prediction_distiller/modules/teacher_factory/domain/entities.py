# src/prediction_distiller/modules/teacher_factory/domain/entities.py
"""
Entidad TeacherPool.

Arquitectura: Domain Layer
Responsabilidad: Colección inmutable de teachers convergidos que comparten
arquitectura y dataset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from prediction_distiller.modules.nn_models import ArchSpec, Checkpoint, Role

from .exceptions import EmptyPoolError, InconsistentPoolError
from .value_objects import TrainingHyperParams


@dataclass(frozen=True)
class TeacherPool:
    """
    Invariantes:
    1. Todos los teachers comparten ArchSpec y dataset_tag con el pool
    2. Cada precisión de train registrada >= piso de convergencia
    3. Rol = teacher
    """

    arch: ArchSpec
    teachers: tuple[Checkpoint, ...]
    dataset_tag: str
    hyper_params: TrainingHyperParams

    def __post_init__(self) -> None:
        object.__setattr__(self, "teachers", tuple(self.teachers))
        if not self.teachers:
            raise EmptyPoolError("Un TeacherPool requiere al menos un teacher")
        floor = self.hyper_params.convergence_floor
        for t in self.teachers:
            if t.arch != self.arch or t.meta.dataset_tag != self.dataset_tag:
                raise InconsistentPoolError(
                    f"Teacher seed={t.meta.seed} no comparte arquitectura/dataset con el pool"
                )
            if t.meta.role is not Role.TEACHER:
                raise InconsistentPoolError(f"Checkpoint seed={t.meta.seed} no tiene rol teacher")
            if t.meta.train_accuracy is None or t.meta.train_accuracy < floor:
                raise InconsistentPoolError(
                    f"Teacher seed={t.meta.seed} con precisión {t.meta.train_accuracy} < piso {floor}"
                )

    def __len__(self) -> int:
        return len(self.teachers)

    @property
    def seeds(self) -> list[int]:
        return [t.meta.seed for t in self.teachers]

    def sample(self, rng: np.random.Generator) -> Checkpoint:
        """Uniforme sobre los miembros."""
        return self.teachers[int(rng.integers(len(self.teachers)))]

    def subset(self, n: int) -> TeacherPool:
        """Los primeros n miembros en orden de manifest (ablación de número de teachers)."""
        if not 1 <= n <= len(self.teachers):
            raise EmptyPoolError(f"subset({n}) fuera de [1, {len(self.teachers)}]")
        return TeacherPool(self.arch, self.teachers[:n], self.dataset_tag, self.hyper_params)
