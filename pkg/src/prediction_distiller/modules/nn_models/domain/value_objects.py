# src/prediction_distiller/modules/nn_models/domain/value_objects.py
"""
Value Objects de Modelos: ArchSpec y metadatos de checkpoint.

Arquitectura: Modular Monolith
Capa: Domain
Responsabilidad: Describir arquitecturas proxy (ConvNet-Dn, MLP) e identificar
cada checkpoint (época, semilla, dataset, rol).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import StrEnum
from typing import Any

from .exceptions import InvalidArchitectureError

# === 🧭 Protocolos Arquitectónicos ===
# ✅ CORE: No depende de nada externo.
# 🔒 Inmutabilidad: frozen=True (hashable: sirve de clave de caché de grafos).


class ModelFamily(StrEnum):
    CONVNET = "convnet"
    MLP = "mlp"


class NormKind(StrEnum):
    NONE = "none"
    INSTANCE = "instance"


class Role(StrEnum):
    TEACHER = "teacher"
    STUDENT = "student"


@dataclass(frozen=True)
class ArchSpec:
    """
    Arquitectura de la familia proxy.

    Invariantes:
    1. depth >= 1, width >= 1, num_classes >= 2
    2. ConvNet: el tamaño espacial tras `depth` poolings 2x2 es >= 1
    3. La normalización por instancia solo aplica a ConvNet
    """

    family: ModelFamily
    depth: int
    width: int
    input_shape: tuple[int, int, int]
    num_classes: int
    norm: NormKind = NormKind.INSTANCE

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", ModelFamily(self.family))
        object.__setattr__(self, "norm", NormKind(self.norm))
        object.__setattr__(self, "input_shape", tuple(int(v) for v in self.input_shape))

        if len(self.input_shape) != 3 or min(self.input_shape) < 1:
            raise InvalidArchitectureError(f"input_shape inválido: {self.input_shape}")
        if self.depth < 1:
            raise InvalidArchitectureError(f"depth debe ser >= 1: {self.depth}")
        if self.width < 1:
            raise InvalidArchitectureError(f"width debe ser >= 1: {self.width}")
        if self.num_classes < 2:
            raise InvalidArchitectureError(f"num_classes debe ser >= 2: {self.num_classes}")
        if self.family is ModelFamily.CONVNET:
            h, w = self.pooled_size
            if h < 1 or w < 1:
                raise InvalidArchitectureError(
                    f"Entrada {self.input_shape[1:]} no admite {self.depth} poolings 2x2"
                )
        elif self.norm is not NormKind.NONE:
            raise InvalidArchitectureError("La familia mlp no admite normalización")

    @property
    def pooled_size(self) -> tuple[int, int]:
        _, h, w = self.input_shape
        for _ in range(self.depth):
            h, w = h // 2, w // 2
        return h, w

    @property
    def name(self) -> str:
        if self.family is ModelFamily.CONVNET:
            return f"ConvNetD{self.depth}-W{self.width}-{self.norm}"
        return f"MLP{self.depth}-W{self.width}"

    @classmethod
    def convnet(
        cls,
        depth: int,
        width: int,
        input_shape: tuple[int, int, int],
        num_classes: int,
        norm: NormKind | str = NormKind.INSTANCE,
    ) -> ArchSpec:
        return cls(ModelFamily.CONVNET, depth, width, input_shape, num_classes, NormKind(norm))

    @classmethod
    def mlp(
        cls, depth: int, width: int, input_shape: tuple[int, int, int], num_classes: int
    ) -> ArchSpec:
        return cls(ModelFamily.MLP, depth, width, input_shape, num_classes, NormKind.NONE)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["family"] = str(self.family)
        data["norm"] = str(self.norm)
        data["input_shape"] = list(self.input_shape)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ArchSpec:
        try:
            return cls(
                family=ModelFamily(data["family"]),
                depth=int(data["depth"]),
                width=int(data["width"]),
                input_shape=tuple(data["input_shape"]),  # type: ignore[arg-type]
                num_classes=int(data["num_classes"]),
                norm=NormKind(data.get("norm", NormKind.INSTANCE)),
            )
        except (KeyError, ValueError, TypeError) as e:
            raise InvalidArchitectureError(f"ArchSpec mal formado: {data}") from e


@dataclass(frozen=True)
class CheckpointMeta:
    """Metadatos de un checkpoint. Invariante: epoch >= 0."""

    epoch: int = 0
    seed: int = 0
    dataset_tag: str = ""
    role: Role = Role.STUDENT
    train_accuracy: float | None = None
    test_accuracy: float | None = None
    init: str = "kaiming_uniform"

    def __post_init__(self) -> None:
        object.__setattr__(self, "role", Role(self.role))
        if self.epoch < 0:
            raise ValueError(f"La época no puede ser negativa: {self.epoch}")

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["role"] = str(self.role)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CheckpointMeta:
        return cls(**data)
