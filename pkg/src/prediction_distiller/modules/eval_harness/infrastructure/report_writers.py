# src/prediction_distiller/modules/eval_harness/infrastructure/report_writers.py
"""
Escritores de resultados de evaluación.

Arquitectura: Infrastructure / Adapters
Responsabilidad:
    - EvalReport y RankingStudy como JSON.
    - Estudios: CSV (setting, mean, std) con sello de config + resumen JSON.
    - Trazas de métricas: CSV (epoch, value).
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any

from prediction_distiller.infrastructure.hashed_csv import write_csv_with_hash
from prediction_distiller.modules.eval_harness.domain.value_objects import EvalReport, StudyResult


def write_json(data: dict[str, Any], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False), encoding="utf-8")
    os.replace(tmp, path)
    return path


def write_eval_report(report: EvalReport, path: Path) -> Path:
    return write_json(report.to_dict(), path)


def write_trace_csv(trace: list[tuple[int, float]], path: Path, config_hash: str = "") -> Path:
    return write_csv_with_hash(path, [{"epoch": e, "value": v} for e, v in trace], config_hash)


def write_study(result: StudyResult, out_dir: Path, config_hash: str = "") -> dict[str, Path]:
    """
    Escribe `<name>.csv` y `<name>.json` (más `<name>_<setting>_trace.csv` por
    traza). Devuelve las rutas escritas.
    """
    out_dir = Path(out_dir)
    written = {
        "csv": write_csv_with_hash(
            out_dir / f"{result.name}.csv", [row.as_row() for row in result.rows], config_hash
        )
    }
    for setting, trace in result.traces.items():
        safe = setting.replace("@", "_at_").replace("=", "")
        written[f"trace:{setting}"] = write_trace_csv(
            trace, out_dir / f"{result.name}_{safe}_trace.csv", config_hash
        )
    summary = {
        "study": result.name,
        "config_hash": config_hash,
        "rows": [row.as_row() for row in result.rows],
        **result.summary,
    }
    written["json"] = write_json(summary, out_dir / f"{result.name}.json")
    return written
