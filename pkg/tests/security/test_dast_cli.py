# tests/security/test_dast_cli.py
"""
Dynamic Application Security Testing (DAST) / Fuzzer para la CLI.

Tipo: Integración/Seguridad (Caja Negra)
Objetivo: Validar que la CLI maneja inputs maliciosos de forma segura (Fail Gracefully),
          sin exponer Stack Traces ni el contenido de archivos ajenos.
"""

import os
import subprocess
import sys
from pathlib import Path

import pytest

# === Variables de Entorno para el Ataque ===
CLI_MODULE = "prediction_distiller.cli"
SRC_DIR = Path(__file__).resolve().parents[2] / "src"


def run_cli_attack(*args: str) -> subprocess.CompletedProcess:
    """Ejecuta la CLI en un subproceso simulando a un atacante real en la terminal."""
    env = {**os.environ, "PYTHONPATH": os.pathsep.join([str(SRC_DIR), os.environ.get("PYTHONPATH", "")])}
    cmd = [sys.executable, "-m", CLI_MODULE, *args]
    return subprocess.run(cmd, capture_output=True, text=True, env=env, timeout=120)


def assert_no_leak(result: subprocess.CompletedProcess) -> None:
    assert "Traceback" not in result.stderr, "VULNERABILIDAD: La CLI filtró un Stack Trace."
    assert "root:x:0:0" not in result.stdout + result.stderr


# === Escenarios de Ataque DAST ===


@pytest.mark.security
def test_dast_path_traversal_config():
    """
    Given: Un atacante pasando un archivo del sistema como configuración.
    When:  Se ejecuta verify.
    Then:  Error de configuración (2) sin traza ni contenido del archivo.
    """
    # ─── ACT ────────────────────────────────────────────────────────────────────
    result = run_cli_attack("verify", "--config", "../../../../etc/passwd", "x.apms")

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert result.returncode == 2
    assert_no_leak(result)


@pytest.mark.security
def test_dast_path_traversal_artifact():
    result = run_cli_attack("export-grid", "../../../../etc/passwd", "out.png")

    assert result.returncode == 3
    assert_no_leak(result)


@pytest.mark.security
def test_dast_poisoned_distilled_file(tmp_path):
    """
    Given: Un texto haciéndose pasar por conjunto destilado.
    When:  Se compara.
    Then:  Error de datos (3) empaquetado, sin arquitectura interna expuesta.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    poisoned = tmp_path / "poisoned.apms"
    poisoned.write_text("APMS<?php system($_GET['cmd']); ?> Esto no es un conjunto destilado.")

    # ─── ACT ────────────────────────────────────────────────────────────────────
    result = run_cli_attack("compare", str(poisoned), str(poisoned))

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert result.returncode == 3
    assert_no_leak(result)
    assert "falló" in result.stderr


@pytest.mark.security
def test_dast_empty_file_denial_of_service(tmp_path):
    empty = tmp_path / "zero_bytes.apms"
    empty.touch()

    result = run_cli_attack("compare", str(empty), str(empty))

    assert result.returncode != 0, "Debería fallar al leer un archivo vacío."
    assert_no_leak(result)


@pytest.mark.security
def test_dast_malformed_toml_injection(tmp_path):
    config = tmp_path / "evil.toml"
    config.write_text('[run]\nout_dir = "/"\nthreads = -1\n__import__ = "os"\n', encoding="utf-8")

    result = run_cli_attack("train-teachers", "--config", str(config))

    assert result.returncode == 1
    assert_no_leak(result)
