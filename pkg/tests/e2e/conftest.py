# tests/e2e/conftest.py
"""
Fixtures E2E: corridas de aceptación a escala de escritorio.

Las corridas sobre MNIST se omiten salvo que APM_MNIST_DIR apunte a los
cuatro archivos IDX (con o sin .gz).
"""

import os
from pathlib import Path

import pytest

MNIST_ENV = "APM_MNIST_DIR"
MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}

MNIST_RUN_TOML = """\
[dataset]
kind = "idx"
path = "{path}"
num_classes = 10
{files}

[preprocessing]
zca = false
normalize = true

[arch]
family = "convnet"
depth = 2
width = 16

[teacher]
n = 5
epochs = 3
batch_size = 128
learning_rate = 0.01
momentum = 0.9
convergence_floor = 0.9

[distill]
rounds = 500
epochs = 50
checkpoints = 5
batch = 100
eta = 0.01
gamma = 0.1
alpha = 0.1
metric = "manhattan"
ipc = 10
log_every = 50

[evaluation]
epochs = 200
n_seeds = 5

[run]
seed = 0
threads = {threads}
out_dir = "{out_dir}"
"""


def _resolve_mnist_files(directory: Path) -> dict[str, str]:
    resolved = {}
    for key, name in MNIST_FILES.items():
        for candidate in (name, f"{name}.gz"):
            if (directory / candidate).is_file():
                resolved[key] = candidate
                break
        else:
            pytest.skip(f"{MNIST_ENV} no contiene {name}[.gz]")
    return resolved


@pytest.fixture(scope="session")
def mnist_config_path(tmp_path_factory) -> Path:
    raw = os.environ.get(MNIST_ENV)
    if not raw:
        pytest.skip(f"Define {MNIST_ENV} con los archivos IDX de MNIST para las corridas de aceptación")
    directory = Path(raw)
    files = _resolve_mnist_files(directory)

    out = tmp_path_factory.mktemp("mnist_run")
    path = out / "mnist.toml"
    path.write_text(
        MNIST_RUN_TOML.format(
            path=directory.as_posix(),
            files="\n".join(f'{key} = "{name}"' for key, name in files.items()),
            threads=max(1, (os.cpu_count() or 2) // 2),
            out_dir=(out / "runs").as_posix(),
        ),
        encoding="utf-8",
    )
    return path
