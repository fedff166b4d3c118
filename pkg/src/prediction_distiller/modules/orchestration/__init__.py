# src/prediction_distiller/modules/orchestration/__init__.py
"""
Módulo de orquestación: RunConfig estricto, hash de configuración y casos de
uso de cada sub-comando.
"""

from __future__ import annotations

from .application.use_cases import (
    DEFAULT_OUT_DIR,
    OUT_DIR_ENV,
    Comparison,
    DistillOutcome,
    ExperimentWorkflow,
    PreparedData,
    VerifyResult,
    compare_distilled,
    export_distilled_grid,
    prepare_data,
    resolve_out_dir,
    verify_artifacts,
)
from .domain.exceptions import (
    ArtifactError,
    ArtifactMismatchError,
    ConfigError,
    ConfigFileError,
    ConfigKeyError,
    ConfigValueError,
)
from .domain.value_objects import (
    ArchConfig,
    DatasetConfig,
    DatasetKind,
    EvaluationConfig,
    PreprocessingConfig,
    RunConfig,
    RunSection,
    TeacherConfig,
)
from .infrastructure.artifacts import embedded_config_hash
from .infrastructure.config_loader import load_run_config, parse_run_config
from .infrastructure.datasets import load_datasets

__all__ = [
    "DEFAULT_OUT_DIR",
    "OUT_DIR_ENV",
    "ArchConfig",
    "ArtifactError",
    "ArtifactMismatchError",
    "Comparison",
    "ConfigError",
    "ConfigFileError",
    "ConfigKeyError",
    "ConfigValueError",
    "DatasetConfig",
    "DatasetKind",
    "DistillOutcome",
    "EvaluationConfig",
    "ExperimentWorkflow",
    "PreparedData",
    "PreprocessingConfig",
    "RunConfig",
    "RunSection",
    "TeacherConfig",
    "VerifyResult",
    "compare_distilled",
    "embedded_config_hash",
    "export_distilled_grid",
    "load_datasets",
    "load_run_config",
    "parse_run_config",
    "prepare_data",
    "resolve_out_dir",
    "verify_artifacts",
]
