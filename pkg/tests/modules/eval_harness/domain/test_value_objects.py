# tests/modules/eval_harness/domain/test_value_objects.py
"""
Tests para: EvalReport, RankingStudy, LabelMode, aggregate
Tipo: Unitario
Arquitectura: AAA (Arrange-Act-Assert) + Given-When-Then
Protocolos: Pureza de dominio
"""

import pytest

# === 🧪 Protocolos de Calidad Obligatorios ===
# 🔒 DOMINIO PURO: Tests sin I/O ni mocks. Solo lógica de negocio.
# 🔤 DETERMINISMO: Sin aleatoriedad sin seed controlado.
from prediction_distiller.core.exceptions import ConfigurationError
from prediction_distiller.modules.eval_harness import (
    EvalReport,
    InvalidScoresError,
    LabelMode,
    RankingStudy,
    StudyRow,
    aggregate,
)
from prediction_distiller.modules.nn_models import ArchSpec, Objective

# ==============================================================================
# === Casos de Prueba: Agregación ===
# ==============================================================================


def test_aggregate_should_use_population_std():
    mean, std = aggregate([0.5, 0.7])

    assert mean == pytest.approx(0.6)
    assert std == pytest.approx(0.1)


def test_single_seed_should_have_zero_std():
    assert aggregate([0.42]) == (pytest.approx(0.42), 0.0)


def test_report_from_accuracies_should_be_consistent():
    """
    Given: Precisiones de 3 semillas.
    When:  Se construye el reporte.
    Then:  mean/std recalculados y reporte no parcial.
    """
    # ─── ACT ────────────────────────────────────────────────────────────────────
    report = EvalReport.from_accuracies([0.8, 0.9, 1.0], [0, 1, 2], arch="ConvNetD1-W4-instance")

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert report.mean == pytest.approx(0.9)
    assert not report.partial
    data = report.to_dict()
    assert data["seeds"] == [0, 1, 2]
    assert data["label_mode"] == "soft-d"
    assert data["partial"] is False


def test_report_with_failures_should_be_partial():
    report = EvalReport.from_accuracies(
        [0.5], [1], failures=({"seed": 0, "error": "TrainingDivergenceError", "message": "x"},)
    )

    assert report.partial
    assert report.to_dict()["failures"][0]["seed"] == 0


def test_report_with_inconsistent_mean_should_raise():
    with pytest.raises(InvalidScoresError, match="recálculo"):
        EvalReport((0.5, 0.7), mean=0.7, std=0.1, seeds=(0, 1))


def test_report_without_accuracies_should_raise():
    with pytest.raises(InvalidScoresError) as exc_info:
        EvalReport((), 0.0, 0.0, ())
    assert isinstance(exc_info.value, ConfigurationError)


# ==============================================================================
# === Casos de Prueba: RankingStudy y LabelMode ===
# ==============================================================================

FAMILY = tuple(ArchSpec.convnet(1, w, (1, 4, 4), 2) for w in (1, 2))


def test_ranking_study_should_require_equal_lengths():
    with pytest.raises(InvalidScoresError, match="igual longitud"):
        RankingStudy(FAMILY, (0.1, 0.2), (0.3,), rho=0.0)


def test_ranking_study_should_reject_rho_out_of_range():
    with pytest.raises(InvalidScoresError):
        RankingStudy(FAMILY, (0.1, 0.2), (0.3, 0.4), rho=1.5)


def test_ranking_study_dict_should_list_architecture_names():
    study = RankingStudy(FAMILY, (0.1, 0.2), (0.3, 0.4), rho=1.0)

    assert study.to_dict()["family"] == ["ConvNetD1-W1-instance", "ConvNetD1-W2-instance"]


@pytest.mark.parametrize(
    "mode, objective, needs_v",
    [
        ("soft-d", Objective.DISTANCE, True),
        ("soft-ce", Objective.SOFT_CE, True),
        ("hard", Objective.HARD_CE, False),
    ],
)
def test_label_mode_should_map_to_training_objective(mode, objective, needs_v):
    assert LabelMode(mode).objective is objective
    assert LabelMode(mode).needs_soft_labels is needs_v


def test_study_row_should_expose_csv_columns():
    assert StudyRow("K=5", 0.9, 0.01).as_row() == {"setting": "K=5", "mean": 0.9, "std": 0.01}
