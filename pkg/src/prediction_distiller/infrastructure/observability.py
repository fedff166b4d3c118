# src/prediction_distiller/infrastructure/observability.py
"""
Observabilidad de corridas largas: logging de doble destino y eventos JSON
correlacionados con latencia y RAM del proceso.

Arquitectura: Infrastructure (compartida por todos los bounded contexts)
Responsabilidad:
    1. configure_logging: consola a `level`; con `log_file`, archivo forense en DEBUG.
    2. Telemetry: eventos `<operación>.<fase>` que comparten correlation_id.
       JSON horizontal por defecto, vertical con LOG_FORMAT=PRETTY.
    3. measure_latency: started / completed / failed alrededor de una operación.
       Las operaciones anidadas y los eventos por ronda heredan el
       correlation_id de la operación en curso.
"""

from __future__ import annotations

import functools
import json
import logging
import os
import sys
import time
import uuid
from collections.abc import Callable, Iterable
from contextvars import ContextVar
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, ParamSpec, TypeVar

import psutil

logger = logging.getLogger("prediction_distiller.telemetry")

P = ParamSpec("P")
R = TypeVar("R")

PRETTY_ENV = "LOG_FORMAT"
CONSOLE_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
FORENSIC_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(funcName)s:%(lineno)d | %(message)s"


def configure_logging(level: int = logging.INFO, log_file: Path | None = None) -> None:
    """
    Reinstala los handlers del root logger (idempotente entre invocaciones de
    la CLI en un mismo proceso). El archivo forense recibe DEBUG aunque la
    consola filtre.
    """
    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(logging.DEBUG if log_file is not None else level)

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt="%H:%M:%S"))
    console.setLevel(level)
    root.addHandler(console)

    if log_file is not None:
        forensic = logging.FileHandler(log_file, mode="a", encoding="utf-8")
        forensic.setFormatter(logging.Formatter(FORENSIC_FORMAT))
        forensic.setLevel(logging.DEBUG)
        root.addHandler(forensic)
        logging.info(f"🔭 Observabilidad iniciada. Log forense en: {log_file}")


def new_correlation_id() -> str:
    return uuid.uuid4().hex[:8]


def process_ram_mb() -> float:
    try:
        return round(psutil.Process(os.getpid()).memory_info().rss / 1024 / 1024, 2)
    except Exception:
        return 0.0


def describe_target(values: Iterable[Any]) -> str:
    """Primera pista legible entre los argumentos: archivo, conjunto sintético o dataset."""
    for value in values:
        if isinstance(value, Path):
            return value.name
        if hasattr(value, "images") and hasattr(value, "ipc"):
            return f"synthetic(|S|={len(value.images)}, ipc={value.ipc})"
        if hasattr(value, "images") and hasattr(value, "tag"):
            return f"dataset({value.tag or 'raw'}, n={len(value.images)})"
    return "unknown"


@dataclass(frozen=True)
class Telemetry:
    """Emisor de eventos de una operación."""

    operation: str
    correlation_id: str = field(default_factory=new_correlation_id)

    def emit(self, phase: str, payload: dict[str, Any], level: int = logging.INFO) -> None:
        entry = {
            "timestamp": time.time(),
            "level": logging.getLevelName(level),
            "event": f"{self.operation}.{phase}",
            "correlation_id": self.correlation_id,
            "data": payload,
        }
        indent = 4 if os.getenv(PRETTY_ENV) == "PRETTY" else None
        logger.log(level, json.dumps(entry, indent=indent, default=str))


_active: ContextVar[Telemetry | None] = ContextVar("active_telemetry", default=None)


def current_telemetry(operation: str) -> Telemetry:
    """Telemetry con el correlation_id de la operación instrumentada en curso, o uno nuevo."""
    active = _active.get()
    return Telemetry(operation, active.correlation_id) if active else Telemetry(operation)


def measure_latency(operation: str) -> Callable[[Callable[P, R]], Callable[P, R]]:
    def decorator(func: Callable[P, R]) -> Callable[P, R]:
        @functools.wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            telemetry = current_telemetry(operation)
            target = describe_target((*args, *kwargs.values()))
            start_ram = process_ram_mb()
            started = time.perf_counter()
            telemetry.emit("started", {"target": target, "start_ram_mb": start_ram})

            token = _active.set(telemetry)
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                telemetry.emit(
                    "failed",
                    {
                        "target": target,
                        "duration_sec": round(time.perf_counter() - started, 3),
                        "crash_ram_mb": process_ram_mb(),
                        "error_type": type(e).__name__,
                        "error_msg": str(e),
                    },
                    level=logging.ERROR,
                )
                raise
            finally:
                _active.reset(token)

            end_ram = process_ram_mb()
            telemetry.emit(
                "completed",
                {
                    "target": target,
                    "duration_sec": round(time.perf_counter() - started, 3),
                    "end_ram_mb": end_ram,
                    "ram_delta_mb": round(end_ram - start_ram, 2),
                    "status": "success",
                },
            )
            return result

        return wrapper

    return decorator
