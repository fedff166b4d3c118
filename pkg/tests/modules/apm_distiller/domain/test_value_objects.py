# tests/modules/apm_distiller/domain/test_value_objects.py
"""
Tests para: DistillConfig, Provenance, SyntheticSet, distancias numpy
Tipo: Unitario
Arquitectura: AAA (Arrange-Act-Assert) + Given-When-Then
Protocolos: Pureza de dominio
"""

import numpy as np
import pytest

# === 🧪 Protocolos de Calidad Obligatorios ===
# 🔒 DOMINIO PURO: Tests sin I/O ni mocks. Solo lógica de negocio.
# 🔤 DETERMINISMO: Sin aleatoriedad sin seed controlado.
from prediction_distiller.core.exceptions import ConfigurationError, NumericDivergenceError
from prediction_distiller.modules.apm_distiller import (
    DistillConfig,
    InvalidDistillConfigError,
    NotFinalizedError,
    Provenance,
    SyntheticDivergenceError,
    SyntheticSet,
    SyntheticSetError,
    UnknownMetricError,
    distance,
    row_distances,
)
from prediction_distiller.modules.tensor_core import Graph, ShapeMismatchError, forward

# ==============================================================================
# === Casos de Prueba: DistillConfig ===
# ==============================================================================


def test_defaults_should_match_documented_hyper_parameters():
    cfg = DistillConfig()

    assert (cfg.rounds, cfg.epochs, cfg.checkpoints, cfg.batch) == (500, 50, 5, 100)
    assert (cfg.eta, cfg.gamma, cfg.alpha) == (0.01, 0.1, 0.1)
    assert cfg.metric == "manhattan"
    assert cfg.init == "confident"


@pytest.mark.parametrize(
    "epochs, checkpoints, expected",
    [
        (250, 5, [50, 100, 150, 200, 250]),
        (1, 1, [1]),
        (10, 10, list(range(1, 11))),
        (7, 3, [2, 4, 6]),
    ],
)
def test_checkpoint_epochs_should_be_first_k_multiples_of_interval(epochs, checkpoints, expected):
    """
    Given: E y K.
    When:  Se calculan las épocas de checkpoint.
    Then:  Son los K primeros múltiplos de ⌊E/K⌋.
    """
    # ─── ACT ────────────────────────────────────────────────────────────────────
    cfg = DistillConfig(epochs=epochs, checkpoints=checkpoints)

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert cfg.checkpoint_epochs() == expected


def test_fixed_checkpoint_epoch_should_override_schedule():
    assert DistillConfig(epochs=10, checkpoints=5, checkpoint_epoch=3).checkpoint_epochs() == [3]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"epochs": 3, "checkpoints": 4},
        {"checkpoints": 0},
        {"batch": 4, "segment": 5},
        {"eta": 0.0},
        {"gamma": -1.0},
        {"alpha": -0.1},
        {"metric": "chebyshev"},
        {"init": "kmeans"},
        {"rounds": -1},
        {"checkpoint_epoch": 0},
        {"student_momentum": 1.0},
    ],
)
def test_invalid_config_should_raise_configuration_error(kwargs):
    with pytest.raises(InvalidDistillConfigError) as exc_info:
        DistillConfig(**kwargs)
    assert isinstance(exc_info.value, ConfigurationError)


def test_batch_size_should_resolve_against_set_size():
    assert DistillConfig(batch=0).batch_size(12) == 12
    assert DistillConfig(batch=5).batch_size(12) == 5
    with pytest.raises(InvalidDistillConfigError, match=r"\|S\|=4"):
        DistillConfig(batch=5).batch_size(4)


def test_segment_zero_should_mean_whole_batch():
    assert DistillConfig(batch=6, segment=0).segment_size(6) == 6
    assert DistillConfig(batch=6, segment=4).segment_size(6) == 4


def test_config_dict_should_use_plain_strings():
    data = DistillConfig(metric="cosine").to_dict()

    assert data["metric"] == "cosine"
    assert type(data["metric"]) is str


def test_provenance_should_round_trip_with_parents():
    prov = Provenance(init_strategy="random", parents=({"seed": 1, "ipc": 2},), rounds_completed=3)

    assert Provenance.from_dict(prov.to_dict()) == prov


# ==============================================================================
# === Casos de Prueba: SyntheticSet ===
# ==============================================================================


def _synset(ipc: int = 2, num_classes: int = 2) -> SyntheticSet:
    labels = np.repeat(np.arange(num_classes), ipc)
    images = np.arange(len(labels) * 4, dtype=np.float32).reshape(len(labels), 1, 2, 2)
    return SyntheticSet(images, labels, num_classes, ipc)


def test_class_imbalance_should_raise():
    with pytest.raises(SyntheticSetError, match="por clase"):
        SyntheticSet(np.zeros((3, 1, 2, 2)), np.array([0, 0, 1]), 2, 2)


def test_soft_labels_row_count_should_match_images():
    with pytest.raises(SyntheticSetError):
        SyntheticSet(np.zeros((2, 1, 1, 1)), np.array([0, 1]), 2, 1, soft_labels=np.zeros((3, 2)))


def test_unfinalized_set_should_refuse_soft_labels():
    with pytest.raises(NotFinalizedError):
        _synset().require_soft_labels()


def test_finalize_should_record_teacher_seed():
    synset = _synset()

    synset.finalize(np.ones((4, 2)), teacher_seed=7)

    assert synset.finalized
    assert synset.provenance.finalization_teacher_seed == 7
    np.testing.assert_array_equal(synset.require_soft_labels(), 1.0)


def test_apply_update_should_reject_non_finite_with_sample_index():
    """
    Given: Una actualización con NaN en la segunda muestra del bloque (slot 3).
    When:  Se aplica.
    Then:  SyntheticDivergenceError con sample_index=3 y u sin cambios.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    synset = _synset()
    before = synset.images.copy()
    update = np.zeros((2, 1, 2, 2), dtype=np.float32)
    update[1, 0, 0, 0] = np.nan

    # ─── ACT & ASSERT ───────────────────────────────────────────────────────────
    with pytest.raises(SyntheticDivergenceError) as exc_info:
        synset.apply_update(np.array([1, 3]), update)
    assert exc_info.value.sample_index == 3
    assert isinstance(exc_info.value, NumericDivergenceError)
    np.testing.assert_array_equal(synset.images, before)


def test_copy_should_be_independent():
    synset = _synset()
    clone = synset.copy()

    synset.apply_update(np.array([0]), np.zeros((1, 1, 2, 2)))

    assert not clone.equals(synset)
    assert clone.images[0].sum() > 0


# ==============================================================================
# === Casos de Prueba: Distancias ===
# ==============================================================================


@pytest.mark.parametrize(
    "metric, a, b, expected",
    [
        ("manhattan", [1.0, -2.0], [0.0, 0.0], 3.0),
        ("euclidean", [3.0, 4.0], [0.0, 0.0], 5.0),
        ("cosine", [1.0, 0.0], [0.0, 2.0], 1.0),
        ("cosine", [0.0, 0.0], [0.0, 0.0], 0.0),
        ("cosine", [0.0, 0.0], [1.0, 1.0], 1.0),
    ],
)
def test_distance_should_match_known_values(metric, a, b, expected):
    assert distance(metric, np.array(a), np.array(b)) == pytest.approx(expected)


@pytest.mark.parametrize("metric", ["manhattan", "euclidean", "cosine"])
def test_numpy_distances_should_agree_with_graph_primitive(metric, rng):
    a = rng.normal(size=(6, 5))
    b = rng.normal(size=(6, 5))
    g = Graph()
    g.set_output(g.distance(metric, g.input("a"), g.input("b")))

    out, _ = forward(g, {"a": a, "b": b})

    np.testing.assert_allclose(row_distances(metric, a, b), out, rtol=1e-9)


def test_unknown_metric_should_raise():
    with pytest.raises(UnknownMetricError):
        row_distances("hamming", np.zeros(2), np.zeros(2))


def test_length_mismatch_should_raise():
    with pytest.raises(ShapeMismatchError):
        distance("manhattan", np.zeros(2), np.zeros(3))
