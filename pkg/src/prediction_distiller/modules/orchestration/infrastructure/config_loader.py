# src/prediction_distiller/modules/orchestration/infrastructure/config_loader.py
"""
Carga estricta de RunConfig desde TOML.

Arquitectura: Infrastructure / Adapters
Responsabilidad: Leer el archivo con tomllib, rechazar secciones o claves
desconocidas y tipos incorrectos nombrando la clave, y construir las
dataclasses de dominio.
"""

from __future__ import annotations

import logging
import tomllib
import types
import typing
from dataclasses import fields
from enum import Enum
from pathlib import Path
from typing import Any

from prediction_distiller.core.exceptions import ConfigurationError
from prediction_distiller.modules.apm_distiller import DistillConfig
from prediction_distiller.modules.orchestration.domain.exceptions import (
    ConfigFileError,
    ConfigKeyError,
    ConfigValueError,
)
from prediction_distiller.modules.orchestration.domain.value_objects import (
    ArchConfig,
    DatasetConfig,
    EvaluationConfig,
    PreprocessingConfig,
    RunConfig,
    RunSection,
    TeacherConfig,
)

logger = logging.getLogger(__name__)

SECTIONS: dict[str, type] = {
    "dataset": DatasetConfig,
    "preprocessing": PreprocessingConfig,
    "arch": ArchConfig,
    "teacher": TeacherConfig,
    "distill": DistillConfig,
    "evaluation": EvaluationConfig,
    "run": RunSection,
}
DISTILL_EXTRA_KEYS = {"ipc": int}


def _coerce(key: str, value: Any, hint: Any) -> Any:
    """Valida `value` contra la anotación del campo y lo convierte si procede."""
    origin = typing.get_origin(hint)
    if origin in (typing.Union, types.UnionType):
        # TOML no tiene null: X | None exige un X
        options = [a for a in typing.get_args(hint) if a is not type(None)]
        return _coerce(key, value, options[0])
    if origin is tuple:
        (item_hint, *_) = typing.get_args(hint)
        if not isinstance(value, list):
            raise ConfigValueError(key, f"se esperaba una lista, no {type(value).__name__}")
        return tuple(_coerce(f"{key}[{i}]", v, item_hint) for i, v in enumerate(value))
    if hint is bool:
        if not isinstance(value, bool):
            raise ConfigValueError(key, f"se esperaba true/false, no {value!r}")
        return value
    if hint is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigValueError(key, f"se esperaba un entero, no {value!r}")
        return value
    if hint is float:
        if isinstance(value, bool) or not isinstance(value, int | float):
            raise ConfigValueError(key, f"se esperaba un número, no {value!r}")
        return float(value)
    if hint is str or (isinstance(hint, type) and issubclass(hint, Enum)):
        if not isinstance(value, str):
            raise ConfigValueError(key, f"se esperaba texto, no {value!r}")
        if isinstance(hint, type) and issubclass(hint, Enum):
            allowed = [m.value for m in hint]
            if value not in allowed:
                raise ConfigValueError(key, f"{value!r} no está en {allowed}")
        return value
    raise ConfigValueError(key, f"tipo de campo no soportado: {hint}")


def _build_section(name: str, cls: type, raw: dict[str, Any]) -> Any:
    hints = typing.get_type_hints(cls)
    known = {f.name for f in fields(cls)}
    values = {}
    for key, value in raw.items():
        if key not in known:
            raise ConfigKeyError(f"{name}.{key}", f"claves válidas: {sorted(known)}")
        values[key] = _coerce(f"{name}.{key}", value, hints[key])
    try:
        return cls(**values)
    except ConfigValueError:
        raise
    except (ConfigurationError, ValueError) as e:
        raise ConfigValueError(name, str(e)) from e


def parse_run_config(data: dict[str, Any]) -> RunConfig:
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise ConfigKeyError(unknown[0], f"secciones válidas: {sorted(SECTIONS)}")
    for name, section in data.items():
        if not isinstance(section, dict):
            raise ConfigValueError(name, "se esperaba una tabla [sección]")

    run = _build_section("run", RunSection, data.get("run", {}))

    distill_raw = dict(data.get("distill", {}))
    extras = {}
    for key, hint in DISTILL_EXTRA_KEYS.items():
        if key in distill_raw:
            extras[key] = _coerce(f"distill.{key}", distill_raw.pop(key), hint)
    distill_raw.setdefault("seed", run.seed)

    return RunConfig(
        dataset=_build_section("dataset", DatasetConfig, data.get("dataset", {})),
        preprocessing=_build_section("preprocessing", PreprocessingConfig, data.get("preprocessing", {})),
        arch=_build_section("arch", ArchConfig, data.get("arch", {})),
        teacher=_build_section("teacher", TeacherConfig, data.get("teacher", {})),
        distill=_build_section("distill", DistillConfig, distill_raw),
        evaluation=_build_section("evaluation", EvaluationConfig, data.get("evaluation", {})),
        run=run,
        **extras,
    )


def load_run_config(path: Path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigFileError(f"No existe el archivo de configuración: {path}")
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ConfigFileError(f"{path}: TOML inválido: {e}") from e

    config = parse_run_config(data)
    logger.info(f"Configuración cargada: {path} (hash {config.config_hash[:12]})")
    return config
