# src/prediction_distiller/modules/apm_distiller/domain/ports.py
"""
Puertos del dominio de Destilación.

Arquitectura: Hexagonal (Ports)
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Any, Protocol

from .entities import SyntheticSet


class DistilledStore(Protocol):
    """Persistencia del conjunto sintético (formato APMS)."""

    def save(self, synset: SyntheticSet, path: Path) -> Path: ...

    def load(self, path: Path) -> SyntheticSet: ...


class MetricsSink(Protocol):
    """Destino de las filas de métricas por ronda."""

    def write(self, rows: Sequence[dict[str, Any]]) -> None: ...
