# src/prediction_distiller/modules/teacher_factory/__init__.py
"""
Módulo teacher-factory: pool de teachers convergidos y su persistencia.
"""

from __future__ import annotations

from .application.use_cases import (
    BuildTeacherPool,
    build_pool,
    pool_hash,
    sample_teacher,
    train_teacher,
)
from .domain.entities import TeacherPool
from .domain.exceptions import (
    EmptyPoolError,
    InconsistentPoolError,
    NotConvergedError,
    PoolBuildError,
    PoolIntegrityError,
    TeacherError,
)
from .domain.ports import PoolStore
from .domain.value_objects import TrainingHyperParams
from .infrastructure.pool_store import (
    MANIFEST_NAME,
    DirectoryPoolStore,
    file_sha256,
    load_pool,
    read_manifest,
    teacher_filename,
)

__all__ = [
    "MANIFEST_NAME",
    "BuildTeacherPool",
    "DirectoryPoolStore",
    "EmptyPoolError",
    "InconsistentPoolError",
    "NotConvergedError",
    "PoolBuildError",
    "PoolIntegrityError",
    "PoolStore",
    "TeacherError",
    "TeacherPool",
    "TrainingHyperParams",
    "build_pool",
    "file_sha256",
    "load_pool",
    "pool_hash",
    "read_manifest",
    "sample_teacher",
    "teacher_filename",
    "train_teacher",
]
