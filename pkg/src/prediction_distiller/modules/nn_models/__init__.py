# src/prediction_distiller/modules/nn_models/__init__.py
"""
Módulo nn-models: arquitecturas proxy, inicialización, logits y checkpoints.
"""

from __future__ import annotations

from .application.use_cases import (
    IMAGE_INPUT,
    accuracy,
    build_logits,
    check_batch_shape,
    forward_logits,
    init_params,
    logits_graph,
    parameter_count,
    parameter_shapes,
    predict,
    validate_params,
)
from .application.training import (
    Objective,
    SgdOptimizer,
    SgdSchedule,
    dataset_loss,
    gradient_norm,
    loss_and_grad,
    objective_graph,
    prepare_targets,
    softmax_rows,
    train_network,
)
from .domain.entities import Checkpoint
from .domain.exceptions import (
    CheckpointFormatError,
    InputShapeError,
    InvalidArchitectureError,
    ModelError,
    ParameterMismatchError,
    TrainingDivergenceError,
)
from .domain.ports import CheckpointStore
from .domain.value_objects import ArchSpec, CheckpointMeta, ModelFamily, NormKind, Role
from .infrastructure.checkpoint_codec import ApmcCheckpointStore, load_checkpoint, save_checkpoint

__all__ = [
    "IMAGE_INPUT",
    "ApmcCheckpointStore",
    "ArchSpec",
    "Checkpoint",
    "CheckpointFormatError",
    "CheckpointMeta",
    "CheckpointStore",
    "InputShapeError",
    "InvalidArchitectureError",
    "ModelError",
    "ModelFamily",
    "NormKind",
    "Objective",
    "ParameterMismatchError",
    "Role",
    "SgdOptimizer",
    "SgdSchedule",
    "TrainingDivergenceError",
    "accuracy",
    "build_logits",
    "check_batch_shape",
    "dataset_loss",
    "forward_logits",
    "gradient_norm",
    "init_params",
    "load_checkpoint",
    "logits_graph",
    "loss_and_grad",
    "objective_graph",
    "parameter_count",
    "parameter_shapes",
    "predict",
    "prepare_targets",
    "save_checkpoint",
    "softmax_rows",
    "train_network",
    "validate_params",
]
