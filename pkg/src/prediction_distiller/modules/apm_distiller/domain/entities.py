# src/prediction_distiller/modules/apm_distiller/domain/entities.py
"""
Entidad SyntheticSet: el conjunto destilado S = {(u_i, v_i)} con clases y_u.

Arquitectura: Domain Layer
Responsabilidad: Custodiar u (optimizable), y_u (fijo) y v (solo tras la
finalización). Es la única entidad mutable del bucle: las rondas escriben
en slots disjuntos de u.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from prediction_distiller.modules.tensor_core import Tensor

from .exceptions import NotFinalizedError, SyntheticDivergenceError, SyntheticSetError
from .value_objects import Provenance


@dataclass
class SyntheticSet:
    """
    Invariantes:
    1. Exactamente `ipc` imágenes por clase en `labels`
    2. `soft_labels`, si existe, tiene una fila por imagen
    3. `images` finitas tras cada actualización
    """

    images: Tensor
    labels: np.ndarray
    num_classes: int
    ipc: int
    soft_labels: Tensor | None = None
    provenance: Provenance = field(default_factory=Provenance)

    def __post_init__(self) -> None:
        self.images = np.array(self.images, dtype=np.float32, copy=True, order="C")
        self.labels = np.array(self.labels, dtype=np.int64, copy=True)
        self.labels.flags.writeable = False

        if self.images.ndim != 4 or self.images.shape[0] != self.labels.shape[0]:
            raise SyntheticSetError(
                f"Formas incompatibles: imágenes {self.images.shape}, etiquetas {self.labels.shape}"
            )
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            raise SyntheticSetError(f"Etiquetas fuera de [0, {self.num_classes})")
        counts = np.bincount(self.labels, minlength=self.num_classes)
        if self.ipc < 0 or not np.all(counts == self.ipc):
            raise SyntheticSetError(f"Se esperan {self.ipc} imágenes por clase, hay {counts.tolist()}")
        if not np.isfinite(self.images).all():
            raise SyntheticSetError("Imágenes sintéticas con valores no finitos")
        if self.soft_labels is not None:
            self.soft_labels = np.array(self.soft_labels, dtype=np.float32, copy=True)
            if self.soft_labels.ndim != 2 or self.soft_labels.shape[0] != len(self):
                raise SyntheticSetError(
                    f"v de forma {self.soft_labels.shape} para {len(self)} imágenes"
                )

    def __len__(self) -> int:
        return int(self.images.shape[0])

    @property
    def image_shape(self) -> tuple[int, int, int]:
        c, h, w = self.images.shape[1:]
        return int(c), int(h), int(w)

    @property
    def finalized(self) -> bool:
        return self.soft_labels is not None

    def require_soft_labels(self) -> Tensor:
        if self.soft_labels is None:
            raise NotFinalizedError("El conjunto no está finalizado: no hay logits v")
        return self.soft_labels

    def apply_update(self, indices: np.ndarray, new_images: Tensor) -> None:
        """Escribe u en los slots `indices`. Rechaza valores no finitos."""
        new_images = np.asarray(new_images, dtype=np.float32)
        bad = ~np.isfinite(new_images.reshape(len(indices), -1)).all(axis=1)
        if bad.any():
            raise SyntheticDivergenceError(int(np.asarray(indices)[bad][0]))
        self.images[indices] = new_images

    def finalize(self, soft_labels: Tensor, teacher_seed: int) -> None:
        self.soft_labels = np.array(soft_labels, dtype=np.float32, copy=True)
        if self.soft_labels.shape[0] != len(self):
            raise SyntheticSetError(f"v con {self.soft_labels.shape[0]} filas para {len(self)} imágenes")
        self.provenance = replace(self.provenance, finalization_teacher_seed=teacher_seed)

    def copy(self) -> SyntheticSet:
        return SyntheticSet(
            self.images, self.labels, self.num_classes, self.ipc, self.soft_labels, self.provenance
        )

    def equals(self, other: SyntheticSet) -> bool:
        """Igualdad bit a bit de u, y, v y procedencia."""
        same_v = (self.soft_labels is None and other.soft_labels is None) or (
            self.soft_labels is not None
            and other.soft_labels is not None
            and self.soft_labels.tobytes() == other.soft_labels.tobytes()
            and self.soft_labels.shape == other.soft_labels.shape
        )
        return (
            self.images.shape == other.images.shape
            and self.images.tobytes() == other.images.tobytes()
            and np.array_equal(self.labels, other.labels)
            and self.num_classes == other.num_classes
            and self.ipc == other.ipc
            and same_v
            and self.provenance == other.provenance
        )
