# src/prediction_distiller/core/value_objects.py
"""
Building blocks universales del scaffold.

Arquitectura: Core
Responsabilidad: Value Objects lógicos reusables (sin conocimiento del dominio)
y hashing canónico de estructuras serializables.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class PositiveValue:
    """
    Value Object universal: valida invariante de dominio (valor > 0).
    Building block reusable en CUALQUIER sistema que requiera números positivos.
    """

    value: float

    def __post_init__(self) -> None:
        if not self.value > 0:
            raise ValueError(f"Must be positive: {self.value}")


@dataclass(frozen=True)
class NonNegativeValue:
    """Valida invariante (valor >= 0)."""

    value: float

    def __post_init__(self) -> None:
        if not self.value >= 0:
            raise ValueError(f"Must be non-negative: {self.value}")


def require_positive(name: str, value: float) -> None:
    """Atajo para validar campos de dataclasses con mensaje que nombra la clave."""
    try:
        PositiveValue(value)
    except ValueError as e:
        raise ValueError(f"'{name}' debe ser > 0 (recibido: {value})") from e


def require_non_negative(name: str, value: float) -> None:
    try:
        NonNegativeValue(value)
    except ValueError as e:
        raise ValueError(f"'{name}' debe ser >= 0 (recibido: {value})") from e


def canonical_json(payload: Any) -> str:
    """JSON canónico: claves ordenadas, sin espacios. Base de todos los hashes."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)


def canonical_hash(payload: Any) -> str:
    """SHA-256 hex del JSON canónico."""
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()
