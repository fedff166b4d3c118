# tests/conftest.py
"""
Fixtures compartidos por toda la suite.

Escala "de escritorio": blobs de 3 clases en imágenes 1x4x4, una ConvNet de
profundidad 1 y un pool de 2 teachers. Todo determinista por semilla.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

from prediction_distiller.modules.apm_distiller import DistillConfig
from prediction_distiller.modules.data_pipeline import LabeledDataset, make_blobs
from prediction_distiller.modules.eval_harness import EvalSettings
from prediction_distiller.modules.nn_models import ArchSpec
from prediction_distiller.modules.orchestration import ExperimentWorkflow, load_run_config
from prediction_distiller.modules.teacher_factory import (
    TeacherPool,
    TrainingHyperParams,
    build_pool,
)

# === Constantes de la escala de prueba ===
NUM_CLASSES = 3
IMAGE_SHAPE = (1, 4, 4)


@pytest.fixture(scope="session")
def blobs_train() -> LabeledDataset:
    return make_blobs(NUM_CLASSES, 8, IMAGE_SHAPE, seed=0, noise=0.05, split="train")


@pytest.fixture(scope="session")
def blobs_test() -> LabeledDataset:
    return make_blobs(NUM_CLASSES, 4, IMAGE_SHAPE, seed=0, noise=0.05, split="test")


@pytest.fixture(scope="session")
def tiny_arch() -> ArchSpec:
    return ArchSpec.convnet(depth=1, width=4, input_shape=IMAGE_SHAPE, num_classes=NUM_CLASSES)


@pytest.fixture(scope="session")
def tiny_hyper_params() -> TrainingHyperParams:
    return TrainingHyperParams(epochs=20, batch_size=8, learning_rate=0.05, convergence_floor=0.0)


@pytest.fixture(scope="session")
def tiny_pool(blobs_train, tiny_arch, tiny_hyper_params) -> TeacherPool:
    """Dos teachers entrenados una sola vez por sesión."""
    return build_pool(blobs_train, tiny_arch, tiny_hyper_params, n_teachers=2, base_seed=0)


@pytest.fixture
def tiny_distill_config() -> DistillConfig:
    return DistillConfig(
        rounds=2, epochs=4, checkpoints=2, batch=6, eta=0.05, gamma=0.1, alpha=0.1, seed=0, log_every=1
    )


@pytest.fixture
def tiny_eval_settings() -> EvalSettings:
    return EvalSettings(epochs=5, learning_rate=0.05, n_seeds=2)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


TINY_RUN_TOML = """\
[dataset]
kind = "blobs"
num_classes = 3
per_class = 8
test_per_class = 4
image_shape = [1, 4, 4]
noise = 0.05

[preprocessing]
zca = false
normalize = true

[arch]
family = "convnet"
depth = 1
width = 4

[teacher]
n = 2
epochs = 20
batch_size = 8
learning_rate = 0.05
convergence_floor = 0.0

[distill]
rounds = 2
epochs = 4
checkpoints = 2
batch = 6
eta = 0.05
ipc = 2
log_every = 1

[evaluation]
epochs = 3
n_seeds = 2

[run]
seed = 0
out_dir = "{out_dir}"
"""


def write_run_toml(directory: Path, extra: str = "", name: str = "config.toml") -> Path:
    """config.toml mínimo (blobs) con salidas en `directory/runs` y `extra` al final."""
    path = directory / name
    out_dir = (directory / "runs").as_posix()
    path.write_text(TINY_RUN_TOML.format(out_dir=out_dir) + extra, encoding="utf-8")
    return path


@pytest.fixture
def tiny_run_toml(tmp_path):
    return lambda extra="", name="config.toml": write_run_toml(tmp_path, extra, name)


@dataclass(frozen=True)
class TinyRun:
    config_path: Path
    workflow: ExperimentWorkflow
    manifest: Path
    distilled: Path
    metrics: Path


@pytest.fixture(scope="session")
def tiny_run(tmp_path_factory) -> TinyRun:
    """Pool y conjunto destilado de la corrida mínima, construidos una vez por sesión."""
    directory = tmp_path_factory.mktemp("tiny_run")
    config_path = write_run_toml(directory)
    workflow = ExperimentWorkflow(load_run_config(config_path))
    manifest = workflow.train_teachers()
    outcome = workflow.distill(manifest.parent)
    return TinyRun(config_path, workflow, manifest, outcome.path, outcome.metrics_path)


@pytest.fixture
def restore_root_handlers():
    """configure_logging() reinstala los handlers del root logger; se restauran tras el test."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
