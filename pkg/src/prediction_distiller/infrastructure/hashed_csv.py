# src/prediction_distiller/infrastructure/hashed_csv.py
"""
CSV con sello de configuración.

Arquitectura: Shared Infrastructure
Responsabilidad: Primera línea `# config_hash: <hex>`, luego cabecera y filas.
Lo usan las métricas de destilación y los estudios.
"""

from __future__ import annotations

import csv
from collections.abc import Sequence
from pathlib import Path
from typing import Any

HASH_PREFIX = "# config_hash:"


def write_csv_with_hash(path: Path, rows: Sequence[dict[str, Any]], config_hash: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fieldnames: list[str] = []
    for row in rows:
        fieldnames.extend(k for k in row if k not in fieldnames)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(f"{HASH_PREFIX} {config_hash}\n")
        if fieldnames:
            writer = csv.DictWriter(f, fieldnames=fieldnames)
            writer.writeheader()
            writer.writerows(rows)
    return path


def read_csv_with_hash(path: Path) -> tuple[str, list[dict[str, str]]]:
    with open(path, newline="", encoding="utf-8") as f:
        first = f.readline().strip()
        config_hash = first.removeprefix(HASH_PREFIX).strip() if first.startswith(HASH_PREFIX) else ""
        return config_hash, list(csv.DictReader(f))
