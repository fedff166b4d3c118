# tests/modules/nn_models/infrastructure/test_checkpoint_codec.py
"""
Tests para: checkpoint_codec.py (formato APMC)
Tipo: Integración (I/O en tmp_path)
Arquitectura: AAA (Arrange-Act-Assert) + Given-When-Then
"""

import numpy as np
import pytest

from prediction_distiller.core.exceptions import DataIntegrityError
from prediction_distiller.infrastructure.binary_container import read_container, write_container
from prediction_distiller.modules.nn_models import (
    ApmcCheckpointStore,
    CheckpointFormatError,
    CheckpointMeta,
    Role,
    init_params,
    load_checkpoint,
    save_checkpoint,
)


@pytest.fixture
def teacher_checkpoint(tiny_arch):
    base = init_params(tiny_arch, seed=4, role=Role.TEACHER, dataset_tag="blobs-0-train")
    return base.with_params(dict(base.params), epoch=30, train_accuracy=0.97, test_accuracy=0.91)


# ==============================================================================
# === Casos de Prueba: Ida y vuelta ===
# ==============================================================================


def test_save_then_load_should_be_bit_exact(tmp_path, teacher_checkpoint):
    """
    Given: Un checkpoint de teacher con metadatos completos.
    When:  Se guarda y se vuelve a cargar.
    Then:  Arquitectura, metadatos y tensores son idénticos bit a bit.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    path = tmp_path / "t.apmc"

    # ─── ACT ────────────────────────────────────────────────────────────────────
    save_checkpoint(teacher_checkpoint, path)
    loaded = load_checkpoint(path)

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert loaded.equals(teacher_checkpoint)
    assert loaded.meta == CheckpointMeta(
        epoch=30,
        seed=4,
        dataset_tag="blobs-0-train",
        role=Role.TEACHER,
        train_accuracy=0.97,
        test_accuracy=0.91,
    )
    assert not (tmp_path / "t.apmc.tmp").exists()


def test_file_should_start_with_magic_and_version(tmp_path, teacher_checkpoint):
    path = save_checkpoint(teacher_checkpoint, tmp_path / "t.apmc")

    raw = path.read_bytes()

    assert raw[:4] == b"APMC"
    assert int.from_bytes(raw[4:6], "little") == 1


def test_store_port_should_delegate_to_codec(tmp_path, teacher_checkpoint):
    store = ApmcCheckpointStore()

    store.save(teacher_checkpoint, tmp_path / "nested" / "c.apmc")

    assert store.load(tmp_path / "nested" / "c.apmc").equals(teacher_checkpoint)


# ==============================================================================
# === Casos de Prueba: Archivos dañados ===
# ==============================================================================


def test_truncated_payload_should_raise_format_error(tmp_path, teacher_checkpoint):
    """
    Given: Un APMC válido al que se le quitan los últimos 4 bytes.
    When:  Se carga.
    Then:  CheckpointFormatError (integridad de datos); nunca un checkpoint parcial.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    path = save_checkpoint(teacher_checkpoint, tmp_path / "t.apmc")
    path.write_bytes(path.read_bytes()[:-4])

    # ─── ACT & ASSERT ───────────────────────────────────────────────────────────
    with pytest.raises(CheckpointFormatError, match="truncado") as exc_info:
        load_checkpoint(path)
    assert isinstance(exc_info.value, DataIntegrityError)


def test_wrong_magic_should_raise_format_error(tmp_path, teacher_checkpoint):
    path = save_checkpoint(teacher_checkpoint, tmp_path / "t.apmc")
    path.write_bytes(b"XXXX" + path.read_bytes()[4:])

    with pytest.raises(CheckpointFormatError, match="magic"):
        load_checkpoint(path)


def test_unknown_version_should_raise_format_error(tmp_path, teacher_checkpoint):
    path = save_checkpoint(teacher_checkpoint, tmp_path / "t.apmc")
    raw = bytearray(path.read_bytes())
    raw[4:6] = (9).to_bytes(2, "little")
    path.write_bytes(bytes(raw))

    with pytest.raises(CheckpointFormatError, match="versión 9"):
        load_checkpoint(path)


def test_tiny_file_should_raise_format_error(tmp_path):
    path = tmp_path / "tiny.apmc"
    path.write_bytes(b"APM")

    with pytest.raises(CheckpointFormatError):
        load_checkpoint(path)


def test_loaded_tensors_should_be_float32(tmp_path, teacher_checkpoint):
    loaded = load_checkpoint(save_checkpoint(teacher_checkpoint, tmp_path / "t.apmc"))

    assert {p.dtype for p in loaded.params.values()} == {np.dtype(np.float32)}


def _first_entry(change):
    def corrupt(header):
        header["tensors"][0] = change(header["tensors"][0])

    return corrupt


@pytest.mark.parametrize(
    "corrupt",
    [
        lambda header: header.update(tensors="garbage"),
        _first_entry(lambda entry: "garbage"),
        _first_entry(lambda entry: {k: v for k, v in entry.items() if k != "offset"}),
        _first_entry(lambda entry: {**entry, "nbytes": str(entry["nbytes"])}),
        _first_entry(lambda entry: {**entry, "shape": [-1, *entry["shape"][1:]]}),
    ],
    ids=["table-not-list", "entry-not-dict", "missing-offset", "string-nbytes", "negative-dim"],
)
def test_malformed_tensor_table_should_raise_format_error(tmp_path, teacher_checkpoint, corrupt):
    """
    Given: Un APMC cuya tabla de tensores fue reescrita con filas mal tipadas.
    When:  Se carga.
    Then:  CheckpointFormatError, nunca AttributeError/KeyError ni un checkpoint parcial.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    path = save_checkpoint(teacher_checkpoint, tmp_path / "t.apmc")
    version, header, payload = read_container(path, b"APMC", (1,))
    corrupt(header)
    write_container(path, b"APMC", version, header, payload)

    # ─── ACT & ASSERT ───────────────────────────────────────────────────────────
    with pytest.raises(CheckpointFormatError, match="tabla de tensores"):
        load_checkpoint(path)
