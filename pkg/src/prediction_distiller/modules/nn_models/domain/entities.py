# src/prediction_distiller/modules/nn_models/domain/entities.py
"""
Entidad Checkpoint: parámetros nombrados de una red más su arquitectura.

Arquitectura: Domain Layer
Responsabilidad: Contener θ (teacher o student) de forma inmutable. Entrenar
produce un Checkpoint nuevo en vez de mutar el existente.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Any

import numpy as np

from prediction_distiller.modules.tensor_core import Tensor, frozen_tensor

from .value_objects import ArchSpec, CheckpointMeta


@dataclass(frozen=True)
class Checkpoint:
    arch: ArchSpec
    params: Mapping[str, Tensor]
    meta: CheckpointMeta = field(default_factory=CheckpointMeta)

    def __post_init__(self) -> None:
        # Copias de solo lectura: seguro compartir entre hilos
        frozen = {name: frozen_tensor(value) for name, value in self.params.items()}
        object.__setattr__(self, "params", MappingProxyType(frozen))

    @property
    def parameter_count(self) -> int:
        return int(sum(p.size for p in self.params.values()))

    def bindings(self, prefix: str = "") -> dict[str, Tensor]:
        """Parámetros con el prefijo de nombre usado en el grafo."""
        return {f"{prefix}{name}": value for name, value in self.params.items()}

    def with_params(self, params: Mapping[str, Tensor], **meta_changes: Any) -> Checkpoint:
        return Checkpoint(self.arch, params, replace(self.meta, **meta_changes))

    def equals(self, other: Checkpoint) -> bool:
        """Igualdad bit a bit de arquitectura, metadatos y tensores."""
        if self.arch != other.arch or self.meta != other.meta:
            return False
        if list(self.params) != list(other.params):
            return False
        return all(
            a.shape == b.shape and a.dtype == b.dtype and a.tobytes() == b.tobytes()
            for a, b in zip(self.params.values(), other.params.values(), strict=True)
        )

    def flat(self) -> np.ndarray:
        """Vector concatenado de todos los parámetros (para normas y diagnósticos)."""
        if not self.params:
            return np.zeros(0, dtype=np.float32)
        return np.concatenate([p.reshape(-1) for p in self.params.values()])
