# tests/infrastructure/test_binary_container.py
"""
Tests para: binary_container.py
Tipo: Unitario
Arquitectura: AAA (Arrange-Act-Assert) + Given-When-Then
Protocolos: Aislamiento (tmp_path), Determinismo
"""

import struct

import pytest

from prediction_distiller.core.exceptions import DataIntegrityError
from prediction_distiller.infrastructure.binary_container import (
    ContainerFormatError,
    decode_container,
    encode_container,
    read_container,
    write_container,
)

MAGIC = b"TEST"


def test_container_should_preserve_header_and_payload(tmp_path):
    """
    Given: Una cabecera JSON y un payload binario.
    When:  Se escribe y se vuelve a leer el contenedor.
    Then:  Versión, cabecera y payload son idénticos; no queda el .tmp.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    path = tmp_path / "sub" / "x.bin"
    header = {"count": 3, "name": "ñandú"}
    payload = bytes(range(10))

    # ─── ACT ────────────────────────────────────────────────────────────────────
    write_container(path, MAGIC, 1, header, payload)
    version, read_header, read_payload = read_container(path, MAGIC, (1,))

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert (version, read_header, read_payload) == (1, header, payload)
    assert not (tmp_path / "sub" / "x.bin.tmp").exists()


def test_preamble_should_be_little_endian():
    data = encode_container(MAGIC, 2, {}, b"")
    magic, version, header_len = struct.unpack_from("<4sHI", data)
    assert (magic, version, header_len) == (MAGIC, 2, len(b"{}"))


@pytest.mark.parametrize(
    "mutate, keyword",
    [
        (lambda d: d[:5], "truncado"),
        (lambda d: b"NOPE" + d[4:], "magic"),
        (lambda d: d[:4] + struct.pack("<H", 9) + d[6:], "versión"),
        (lambda d: d[:12], "cabecera"),
    ],
)
def test_decode_should_reject_corrupted_bytes(mutate, keyword):
    """
    Given: Un contenedor válido con bytes alterados.
    When:  Se decodifica.
    Then:  ContainerFormatError (categoría de integridad de datos) con causa explícita.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    data = encode_container(MAGIC, 1, {"k": "valor largo"}, b"payload")

    # ─── ACT & ASSERT ───────────────────────────────────────────────────────────
    with pytest.raises(ContainerFormatError) as exc_info:
        decode_container(mutate(data), MAGIC, (1,))
    assert keyword in str(exc_info.value)
    assert isinstance(exc_info.value, DataIntegrityError)


def test_decode_should_reject_non_object_header():
    data = struct.pack("<4sHI", MAGIC, 1, 2) + b"[]"
    with pytest.raises(ContainerFormatError, match="objeto"):
        decode_container(data, MAGIC, (1,))


def test_missing_file_should_raise_format_error(tmp_path):
    with pytest.raises(ContainerFormatError, match="no se puede leer"):
        read_container(tmp_path / "missing.bin", MAGIC, (1,))
