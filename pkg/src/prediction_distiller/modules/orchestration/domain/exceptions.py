# src/prediction_distiller/modules/orchestration/domain/exceptions.py
"""
Excepciones de Orquestación (configuración de corridas y artefactos).

Arquitectura: Domain Layer
"""

from prediction_distiller.core.exceptions import ConfigurationError, DataIntegrityError


class ConfigError(Exception):
    """Clase base para errores de configuración de corridas."""


class ConfigFileError(ConfigError, ConfigurationError):
    """El archivo de configuración no existe o no es TOML válido."""


class ConfigKeyError(ConfigError, ConfigurationError):
    """Sección o clave desconocida."""

    def __init__(self, key: str, detail: str = ""):
        self.key = key
        super().__init__(f"Clave de configuración inválida '{key}'" + (f": {detail}" if detail else ""))


class ConfigValueError(ConfigError, ConfigurationError):
    """Tipo o valor incorrecto para una clave conocida."""

    def __init__(self, key: str, detail: str):
        self.key = key
        super().__init__(f"Valor inválido para '{key}': {detail}")


class ArtifactError(ConfigError, DataIntegrityError):
    """Artefacto sin sello de configuración legible."""


class ArtifactMismatchError(ConfigError, DataIntegrityError):
    """El config_hash embebido no coincide con el de la configuración."""
