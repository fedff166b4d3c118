# src/prediction_distiller/modules/apm_distiller/infrastructure/metrics_csv.py
"""
Sumidero CSV de métricas por ronda de destilación.

Arquitectura: Infrastructure / Adapters
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Any

from prediction_distiller.infrastructure.hashed_csv import write_csv_with_hash


class CsvMetricsSink:
    """Implementación del puerto MetricsSink."""

    def __init__(self, path: Path, config_hash: str = ""):
        self.path = Path(path)
        self.config_hash = config_hash

    def write(self, rows: Sequence[dict[str, Any]]) -> None:
        write_csv_with_hash(self.path, rows, self.config_hash)
