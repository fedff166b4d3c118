# tests/modules/apm_distiller/infrastructure/test_distilled_codec.py
"""
Tests para: distilled_codec.py (formato APMS)
Tipo: Integración (I/O en tmp_path)
Arquitectura: AAA (Arrange-Act-Assert) + Given-When-Then
"""

import numpy as np
import pytest

from prediction_distiller.core.exceptions import DataIntegrityError
from prediction_distiller.infrastructure.binary_container import read_container, write_container
from prediction_distiller.modules.apm_distiller import (
    ChecksumError,
    DistilledFormatError,
    Provenance,
    SyntheticSet,
    load_distilled,
    save_distilled,
)


@pytest.fixture
def synset(rng) -> SyntheticSet:
    labels = np.repeat(np.arange(3), 2)
    return SyntheticSet(
        images=rng.normal(size=(6, 1, 4, 4)),
        labels=labels,
        num_classes=3,
        ipc=2,
        provenance=Provenance(init_strategy="confident", pool_hash="p" * 64, config_hash="c1", rounds_completed=5),
    )


def test_finalized_set_should_round_trip_bitwise(tmp_path, synset, rng):
    """
    Given: Un conjunto finalizado con logits v.
    When:  Se guarda y se carga.
    Then:  u, y, v y procedencia idénticos bit a bit.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    synset.finalize(rng.normal(size=(6, 3)), teacher_seed=2)

    # ─── ACT ────────────────────────────────────────────────────────────────────
    loaded = load_distilled(save_distilled(synset, tmp_path / "s.apms"))

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert loaded.equals(synset)
    assert loaded.provenance.finalization_teacher_seed == 2


def test_unfinalized_snapshot_should_round_trip_without_logits(tmp_path, synset):
    loaded = load_distilled(save_distilled(synset, tmp_path / "snap.apms"))

    assert not loaded.finalized
    assert loaded.equals(synset)


def test_corrupted_payload_should_fail_crc(tmp_path, synset):
    """
    Given: Un APMS con un byte del payload alterado (mismo largo).
    When:  Se carga.
    Then:  ChecksumError, que es un error de integridad de datos.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    path = save_distilled(synset, tmp_path / "s.apms")
    raw = bytearray(path.read_bytes())
    raw[-3] ^= 0x01
    path.write_bytes(bytes(raw))

    # ─── ACT & ASSERT ───────────────────────────────────────────────────────────
    with pytest.raises(ChecksumError) as exc_info:
        load_distilled(path)
    assert isinstance(exc_info.value, DataIntegrityError)


def test_truncated_file_should_raise_format_error(tmp_path, synset):
    path = save_distilled(synset, tmp_path / "s.apms")
    path.write_bytes(path.read_bytes()[:-8])

    with pytest.raises(DistilledFormatError, match="payload"):
        load_distilled(path)


def test_checkpoint_file_should_be_rejected_by_magic(tmp_path, synset):
    path = save_distilled(synset, tmp_path / "s.apms")
    path.write_bytes(b"APMC" + path.read_bytes()[4:])

    with pytest.raises(DistilledFormatError, match="magic"):
        load_distilled(path)


def test_header_should_carry_config_hash(tmp_path, synset):
    raw = save_distilled(synset, tmp_path / "s.apms").read_bytes()

    assert raw[:4] == b"APMS"
    assert b'"config_hash": "c1"' in raw


@pytest.mark.parametrize(
    "field, value",
    [("image_shape", [-1, 4, 4]), ("count", -6), ("image_shape", [])],
)
def test_invalid_dimensions_should_raise_format_error(tmp_path, synset, field, value):
    path = save_distilled(synset, tmp_path / "s.apms")
    version, header, payload = read_container(path, b"APMS", (1,))
    header[field] = value
    write_container(path, b"APMS", version, header, payload)

    with pytest.raises(DistilledFormatError, match="dimensiones inválidas"):
        load_distilled(path)
