# src/prediction_distiller/modules/orchestration/domain/value_objects.py
"""
Value Objects de Orquestación: secciones de RunConfig.

Arquitectura: Modular Monolith
Capa: Domain
Responsabilidad: Una dataclass congelada por sección del TOML. Las claves
coinciden una a una con la tabla de hiper-parámetros (R, E, K, B, η, γ, α, d).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from enum import StrEnum
from typing import Any

from prediction_distiller.core.value_objects import canonical_hash
from prediction_distiller.modules.apm_distiller import DistillConfig, Metric
from prediction_distiller.modules.eval_harness import EvalSettings, LabelMode
from prediction_distiller.modules.nn_models import ArchSpec, ModelFamily, NormKind
from prediction_distiller.modules.teacher_factory import TrainingHyperParams

from .exceptions import ConfigKeyError, ConfigValueError

# === Guía de Organización ===
# ✅ PUREZA: validación de valores, sin leer disco ni variables de entorno.
# ❌ Las rutas se guardan como texto; el loader y los adaptadores las resuelven.


class DatasetKind(StrEnum):
    IDX = "idx"
    CIFAR = "cifar"
    BLOBS = "blobs"


@dataclass(frozen=True)
class DatasetConfig:
    kind: DatasetKind = DatasetKind.BLOBS
    path: str = ""
    train_images: str = ""
    train_labels: str = ""
    test_images: str = ""
    test_labels: str = ""
    num_classes: int = 10
    # blobs
    per_class: int = 50
    test_per_class: int = 20
    image_shape: tuple[int, ...] = (1, 8, 8)
    noise: float = 0.15
    seed: int = 0

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "kind", DatasetKind(self.kind))
        except ValueError as e:
            raise ConfigValueError("dataset.kind", f"{self.kind!r} no es idx|cifar|blobs") from e
        object.__setattr__(self, "image_shape", tuple(self.image_shape))

        if self.kind is DatasetKind.IDX:
            for key in ("train_images", "train_labels", "test_images", "test_labels"):
                if not getattr(self, key):
                    raise ConfigValueError(f"dataset.{key}", "obligatorio con kind = 'idx'")
        if self.kind is DatasetKind.CIFAR and not self.path:
            raise ConfigValueError("dataset.path", "obligatorio con kind = 'cifar'")
        if len(self.image_shape) != 3:
            raise ConfigValueError("dataset.image_shape", f"se esperan 3 dimensiones: {self.image_shape}")
        if self.num_classes < 2:
            raise ConfigValueError("dataset.num_classes", f"debe ser >= 2: {self.num_classes}")


@dataclass(frozen=True)
class PreprocessingConfig:
    zca: bool = True
    zca_eps: float = 0.1
    normalize: bool = True

    def __post_init__(self) -> None:
        if self.zca_eps <= 0:
            raise ConfigValueError("preprocessing.zca_eps", f"debe ser > 0: {self.zca_eps}")


@dataclass(frozen=True)
class ArchConfig:
    family: ModelFamily = ModelFamily.CONVNET
    depth: int = 3
    width: int = 128
    norm: NormKind = NormKind.INSTANCE

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "family", ModelFamily(self.family))
            object.__setattr__(self, "norm", NormKind(self.norm))
        except ValueError as e:
            raise ConfigValueError("arch", str(e)) from e
        if self.family is ModelFamily.MLP:
            object.__setattr__(self, "norm", NormKind.NONE)

    def to_arch(self, input_shape: tuple[int, int, int], num_classes: int) -> ArchSpec:
        return ArchSpec(self.family, self.depth, self.width, input_shape, num_classes, self.norm)

    def override(self, text: str) -> ArchConfig:
        """Aplica 'width=256,depth=2' (claves de [arch]) sobre esta sección."""
        known = {f.name for f in fields(self)}
        changes: dict[str, Any] = {}
        for item in filter(None, (part.strip() for part in text.split(","))):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise ConfigKeyError(f"arch.{key}", f"se espera clave=valor con claves {sorted(known)}")
            if key in ("depth", "width"):
                try:
                    changes[key] = int(value)
                except ValueError as e:
                    raise ConfigValueError(f"arch.{key}", f"entero esperado: {value!r}") from e
            else:
                changes[key] = value.strip()
        return replace(self, **changes)


@dataclass(frozen=True)
class TeacherConfig:
    n: int = 10
    epochs: int = 30
    batch_size: int = 128
    learning_rate: float = 0.01
    momentum: float = 0.9
    weight_decay: float = 5e-4
    convergence_floor: float = 0.95

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigValueError("teacher.n", f"debe ser >= 1: {self.n}")
        try:
            self.hyper_params()
        except ValueError as e:
            raise ConfigValueError("teacher", str(e)) from e

    def hyper_params(self) -> TrainingHyperParams:
        data = asdict(self)
        data.pop("n")
        return TrainingHyperParams(**data)


@dataclass(frozen=True)
class EvaluationConfig:
    """`learning_rate`, `metric` y `base_seed` vacíos heredan η, d y la semilla global."""

    epochs: int = 200
    learning_rate: float | None = None
    batch_size: int = 0
    label_mode: LabelMode = LabelMode.SOFT_D
    metric: Metric | None = None
    n_seeds: int = 5
    base_seed: int | None = None

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "label_mode", LabelMode(self.label_mode))
            if self.metric is not None:
                object.__setattr__(self, "metric", Metric(self.metric))
        except ValueError as e:
            raise ConfigValueError("evaluation", str(e)) from e
        if self.epochs < 0:
            raise ConfigValueError("evaluation.epochs", f"debe ser >= 0: {self.epochs}")
        if self.n_seeds < 1:
            raise ConfigValueError("evaluation.n_seeds", f"debe ser >= 1: {self.n_seeds}")


@dataclass(frozen=True)
class RunSection:
    """Claves operativas: `out_dir`, `threads` y `log_file` no entran en el hash."""

    seed: int = 0
    out_dir: str = ""
    threads: int = 1
    log_file: str = ""

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise ConfigValueError("run.threads", f"debe ser >= 1: {self.threads}")


OPERATIONAL_RUN_KEYS = ("out_dir", "threads", "log_file")


@dataclass(frozen=True)
class RunConfig:
    """
    Configuración completa de una corrida.

    Invariantes:
    1. Serializable a JSON (to_dict)
    2. El hash canónico se embebe en cada artefacto producido
    """

    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    preprocessing: PreprocessingConfig = field(default_factory=PreprocessingConfig)
    arch: ArchConfig = field(default_factory=ArchConfig)
    teacher: TeacherConfig = field(default_factory=TeacherConfig)
    distill: DistillConfig = field(default_factory=DistillConfig)
    ipc: int = 10
    evaluation: EvaluationConfig = field(default_factory=EvaluationConfig)
    run: RunSection = field(default_factory=RunSection)

    def __post_init__(self) -> None:
        if self.ipc < 1:
            raise ConfigValueError("distill.ipc", f"debe ser >= 1: {self.ipc}")

    def to_dict(self) -> dict[str, Any]:
        distill = self.distill.to_dict()
        distill["ipc"] = self.ipc
        return {
            "dataset": _plain(asdict(self.dataset)),
            "preprocessing": asdict(self.preprocessing),
            "arch": _plain(asdict(self.arch)),
            "teacher": asdict(self.teacher),
            "distill": distill,
            "evaluation": _plain(asdict(self.evaluation)),
            "run": asdict(self.run),
        }

    def with_overrides(self, ipc: int | None = None, segment: int | None = None) -> RunConfig:
        """Configuración efectiva tras los overrides de CLI (su hash es el que se estampa)."""
        distill = self.distill if segment is None else replace(self.distill, segment=segment)
        return replace(self, distill=distill, ipc=self.ipc if ipc is None else ipc)

    @property
    def config_hash(self) -> str:
        payload = self.to_dict()
        for key in OPERATIONAL_RUN_KEYS:
            payload["run"].pop(key)
        return canonical_hash(payload)

    def eval_settings(self) -> EvalSettings:
        ev = self.evaluation
        return EvalSettings(
            epochs=ev.epochs,
            learning_rate=ev.learning_rate if ev.learning_rate is not None else self.distill.eta,
            batch_size=ev.batch_size,
            label_mode=ev.label_mode,
            metric=ev.metric if ev.metric is not None else self.distill.metric,
            n_seeds=ev.n_seeds,
            base_seed=ev.base_seed if ev.base_seed is not None else self.run.seed,
        )


def _plain(data: dict[str, Any]) -> dict[str, Any]:
    """Enums a texto y tuplas a listas para JSON canónico."""
    out: dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, StrEnum):
            value = str(value)
        elif isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out
