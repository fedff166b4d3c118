# src/prediction_distiller/modules/nn_models/application/use_cases.py
"""
Casos de Uso de Modelos: formas de parámetros, inicialización y logits.

Arquitectura: Application Layer
Responsabilidad: Traducir un ArchSpec a nodos del tensor-core. Un mismo grafo
sirve para teacher y students: los parámetros se enlazan por prefijo de nombre.
"""

from __future__ import annotations

import logging
from functools import lru_cache

import numpy as np

from prediction_distiller.core.value_objects import require_positive
from prediction_distiller.modules.nn_models.domain.entities import Checkpoint
from prediction_distiller.modules.nn_models.domain.exceptions import (
    InputShapeError,
    ParameterMismatchError,
)
from prediction_distiller.modules.nn_models.domain.value_objects import (
    ArchSpec,
    CheckpointMeta,
    ModelFamily,
    NormKind,
    Role,
)
from prediction_distiller.modules.tensor_core import Graph, GraphRunner, Tensor

logger = logging.getLogger(__name__)

KERNEL = 3
DEFAULT_CHUNK = 512
IMAGE_INPUT = "x"


def parameter_shapes(arch: ArchSpec) -> dict[str, tuple[int, ...]]:
    """Tabla ordenada nombre -> forma. Es la fuente de verdad de init y del códec."""
    shapes: dict[str, tuple[int, ...]] = {}
    channels, height, width = arch.input_shape

    if arch.family is ModelFamily.CONVNET:
        cin = channels
        for i in range(arch.depth):
            shapes[f"block{i}.conv.weight"] = (arch.width, cin, KERNEL, KERNEL)
            shapes[f"block{i}.conv.bias"] = (arch.width,)
            if arch.norm is NormKind.INSTANCE:
                shapes[f"block{i}.norm.weight"] = (arch.width,)
                shapes[f"block{i}.norm.bias"] = (arch.width,)
            cin = arch.width
        ph, pw = arch.pooled_size
        features = arch.width * ph * pw
    else:
        features = channels * height * width
        for i in range(arch.depth):
            shapes[f"layer{i}.weight"] = (features, arch.width)
            shapes[f"layer{i}.bias"] = (arch.width,)
            features = arch.width

    shapes["head.weight"] = (features, arch.num_classes)
    shapes["head.bias"] = (arch.num_classes,)
    return shapes


def parameter_count(arch: ArchSpec) -> int:
    return int(sum(np.prod(shape) for shape in parameter_shapes(arch).values()))


def _fan_in(name: str, shape: tuple[int, ...]) -> int:
    if name.endswith("conv.weight"):
        return int(np.prod(shape[1:]))
    return shape[0]


def init_params(
    arch: ArchSpec,
    seed: int,
    role: Role = Role.STUDENT,
    dataset_tag: str = "",
) -> Checkpoint:
    """
    Kaiming-uniforme U(-sqrt(6/fan_in), sqrt(6/fan_in)) para pesos,
    sesgos a cero y escala de normalización a uno. Determinista por semilla.
    """
    rng = np.random.default_rng(seed)
    params: dict[str, Tensor] = {}
    for name, shape in parameter_shapes(arch).items():
        if name.endswith("norm.weight"):
            params[name] = np.ones(shape, dtype=np.float32)
        elif name.endswith("bias"):
            params[name] = np.zeros(shape, dtype=np.float32)
        else:
            bound = np.sqrt(6.0 / _fan_in(name, shape))
            params[name] = rng.uniform(-bound, bound, size=shape).astype(np.float32)

    meta = CheckpointMeta(epoch=0, seed=seed, dataset_tag=dataset_tag, role=role)
    return Checkpoint(arch=arch, params=params, meta=meta)


def validate_params(arch: ArchSpec, params: dict[str, Tensor] | Checkpoint) -> None:
    """Los nombres (en orden) y formas deben coincidir con init para el ArchSpec."""
    if isinstance(params, Checkpoint):
        params = dict(params.params)
    expected = parameter_shapes(arch)
    if list(params) != list(expected):
        raise ParameterMismatchError(
            f"Nombres de parámetros {list(params)} != esperados {list(expected)}"
        )
    for name, shape in expected.items():
        if tuple(params[name].shape) != shape:
            raise ParameterMismatchError(
                f"{name}: forma {tuple(params[name].shape)} != esperada {shape}"
            )


def build_logits(graph: Graph, arch: ArchSpec, x: int, prefix: str = "") -> int:
    """
    Añade la red al grafo sobre el nodo de imágenes `x` y devuelve el nodo de
    logits (N, C_out). Los parámetros son inputs llamados `<prefix><nombre>`.
    """

    def p(name: str) -> int:
        return graph.input(f"{prefix}{name}")

    h = x
    if arch.family is ModelFamily.CONVNET:
        for i in range(arch.depth):
            h = graph.conv2d(h, p(f"block{i}.conv.weight"), p(f"block{i}.conv.bias"), pad=1)
            if arch.norm is NormKind.INSTANCE:
                h = graph.instance_norm(h, p(f"block{i}.norm.weight"), p(f"block{i}.norm.bias"))
            h = graph.relu(h)
            h = graph.avg_pool2(h)
        h = graph.flatten(h)
    else:
        h = graph.flatten(h)
        for i in range(arch.depth):
            h = graph.add(graph.matmul(h, p(f"layer{i}.weight")), p(f"layer{i}.bias"))
            h = graph.relu(h)

    return graph.add(graph.matmul(h, p("head.weight")), p("head.bias"))


@lru_cache(maxsize=64)
def logits_graph(arch: ArchSpec) -> Graph:
    """Grafo de solo inferencia por arquitectura. No se muta tras construirse."""
    graph = Graph()
    x = graph.input(IMAGE_INPUT)
    return graph.set_output(build_logits(graph, arch, x))


def check_batch_shape(arch: ArchSpec, images: np.ndarray) -> None:
    if images.ndim != 4 or tuple(images.shape[1:]) != arch.input_shape:
        raise InputShapeError(
            f"Batch de forma {images.shape} incompatible con entrada {arch.input_shape}"
        )


def forward_logits(
    checkpoint: Checkpoint, images: np.ndarray, chunk_size: int = DEFAULT_CHUNK
) -> Tensor:
    """
    Logits (N, C_out) sin softmax. Función pura de (params, batch); se evalúa
    por bloques para acotar memoria.
    """
    require_positive("chunk_size", chunk_size)
    arch = checkpoint.arch
    images = np.asarray(images, dtype=np.float32)
    check_batch_shape(arch, images)

    out = np.zeros((images.shape[0], arch.num_classes), dtype=np.float32)
    if images.shape[0] == 0:
        return out

    runner = GraphRunner(logits_graph(arch))
    bindings = checkpoint.bindings()
    for start in range(0, images.shape[0], chunk_size):
        stop = start + chunk_size
        out[start:stop] = runner.forward({**bindings, IMAGE_INPUT: images[start:stop]})
    return out


def predict(checkpoint: Checkpoint, images: np.ndarray) -> np.ndarray:
    return forward_logits(checkpoint, images).argmax(axis=1)


def accuracy(checkpoint: Checkpoint, images: np.ndarray, labels: np.ndarray) -> float:
    if len(labels) == 0:
        return 0.0
    return float(np.mean(predict(checkpoint, images) == np.asarray(labels)))
