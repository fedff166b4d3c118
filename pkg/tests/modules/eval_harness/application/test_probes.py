# tests/modules/eval_harness/application/test_probes.py
"""
Tests para: probes.py (traza de norma de gradiente, cociente pico/mediana)
Tipo: Unitario
Arquitectura: AAA (Arrange-Act-Assert) + Given-When-Then
"""

import numpy as np
import pytest

# === 🧪 Protocolos de Calidad Obligatorios ===
# 🔒 DOMINIO PURO: Tests sin I/O ni mocks. Solo lógica de negocio.
# 🔤 DETERMINISMO: Sin aleatoriedad sin seed controlado.
from prediction_distiller.modules.apm_distiller import SyntheticSet
from prediction_distiller.modules.eval_harness import (
    EmptySyntheticSetError,
    gradient_norm_trace,
    peak_to_median_ratio,
    random_subset_set,
)


def test_trace_should_have_one_entry_per_epoch(blobs_train, tiny_pool, tiny_arch):
    """
    Given: Un subconjunto finalizado.
    When:  Se traza la norma de gradiente durante 6 épocas.
    Then:  6 pares (época, norma) con épocas 0..5 y normas finitas positivas.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    synset = random_subset_set(blobs_train, 2, np.random.default_rng(0), tiny_pool.teachers[0])

    # ─── ACT ────────────────────────────────────────────────────────────────────
    trace = gradient_norm_trace(synset, tiny_arch, epochs=6, seed=0, learning_rate=0.05)

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert [e for e, _ in trace] == list(range(6))
    assert all(np.isfinite(v) and v > 0 for _, v in trace)


def test_trace_should_be_deterministic(blobs_train, tiny_arch):
    synset = random_subset_set(blobs_train, 2, np.random.default_rng(0))

    a = gradient_norm_trace(synset, tiny_arch, 3, seed=1, label_mode="hard")
    b = gradient_norm_trace(synset, tiny_arch, 3, seed=1, label_mode="hard")

    assert a == b


def test_trace_of_empty_set_should_raise(tiny_arch):
    empty = SyntheticSet(np.zeros((0, 1, 4, 4)), np.zeros(0, dtype=int), num_classes=3, ipc=0)

    with pytest.raises(EmptySyntheticSetError):
        gradient_norm_trace(empty, tiny_arch, 3, seed=0)


# ==============================================================================
# === Casos de Prueba: Cociente pico/mediana ===
# ==============================================================================

SPIKE_TRACE = [(e, 4.0 if e == 5 else 1.0) for e in range(10)]


@pytest.mark.parametrize("epoch, expected", [(5, 4.0), (4, 4.0), (2, 1.0)])
def test_ratio_should_look_only_inside_the_window(epoch, expected):
    """Con 10 épocas y ventana 10% el radio es 1 época."""
    assert peak_to_median_ratio(SPIKE_TRACE, epoch) == pytest.approx(expected)


def test_ratio_with_zero_median_should_be_infinite():
    trace = [(0, 0.0), (1, 0.0), (2, 3.0)]

    assert peak_to_median_ratio(trace, 2) == float("inf")


def test_ratio_of_empty_trace_should_raise():
    with pytest.raises(EmptySyntheticSetError):
        peak_to_median_ratio([], 0)


def test_window_outside_trace_should_raise():
    with pytest.raises(ValueError, match="ventana"):
        peak_to_median_ratio(SPIKE_TRACE, 50)
