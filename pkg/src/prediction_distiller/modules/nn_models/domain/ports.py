# src/prediction_distiller/modules/nn_models/domain/ports.py
"""
Puertos del dominio de Modelos.

Arquitectura: Hexagonal (Ports)
"""

from __future__ import annotations

from pathlib import Path
from typing import Protocol

from .entities import Checkpoint


class CheckpointStore(Protocol):
    """Persistencia de checkpoints. La implementación concreta es el códec APMC."""

    def save(self, checkpoint: Checkpoint, path: Path) -> None: ...

    def load(self, path: Path) -> Checkpoint: ...
