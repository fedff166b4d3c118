# tests/modules/apm_distiller/application/test_adversarial.py
"""
Tests para: adversarial.py y student_phase.py
Tipo: Unitario (oráculos calculados a mano)
Arquitectura: AAA (Arrange-Act-Assert) + Given-When-Then
Protocolos: Determinismo

Red de oráculo: MLP de 1 capa oculta de ancho 1 sobre una imagen (1,1,1) y
2 clases. Con x = 1, capa oculta identidad y head [[h, 0]] los logits son [h, 0].
"""

import math

import numpy as np
import pytest

# === 🧪 Protocolos de Calidad Obligatorios ===
# 🔒 DOMINIO PURO: Tests sin I/O ni mocks. Solo lógica de negocio.
# 🔤 DETERMINISMO: Sin aleatoriedad sin seed controlado.
from prediction_distiller.modules.apm_distiller import (
    DistillConfig,
    Reduction,
    adversarial_loss,
    student_phase,
)
from prediction_distiller.modules.nn_models import ArchSpec, Checkpoint, CheckpointMeta, Role

ORACLE_ARCH = ArchSpec.mlp(depth=1, width=1, input_shape=(1, 1, 1), num_classes=2)
X = np.ones((1, 1, 1), dtype=np.float32)
TEACHER_CE = math.log(1.0 + math.exp(-2.0))  # -log softmax([2, 0])[0]


def _oracle_net(head: float, role: Role = Role.STUDENT) -> Checkpoint:
    params = {
        "layer0.weight": np.array([[1.0]]),
        "layer0.bias": np.array([0.0]),
        "head.weight": np.array([[head, 0.0]]),
        "head.bias": np.array([0.0, 0.0]),
    }
    return Checkpoint(ORACLE_ARCH, params, CheckpointMeta(role=role))


# ==============================================================================
# === Casos de Prueba: Pérdida adversarial ===
# ==============================================================================


def test_adversarial_loss_should_match_hand_computed_value():
    """
    Given: Teacher con logits [2, 0], student con logits [1, 0], y = 0, α = 0.1, L1.
    When:  Se evalúa L_u.
    Then:  -log(1) + 0.1·log(1 + e^-2) ≈ 0.0126928.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    teacher = _oracle_net(2.0, Role.TEACHER)
    student = _oracle_net(1.0)

    # ─── ACT ────────────────────────────────────────────────────────────────────
    loss = adversarial_loss(teacher, [student], X, 0, "manhattan", alpha=0.1)

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert loss == pytest.approx(0.1 * TEACHER_CE, rel=1e-5)
    assert loss == pytest.approx(0.0126928, abs=1e-6)


def test_identical_student_should_hit_log_floor_per_checkpoint():
    """
    Given: Dos checkpoints de student idénticos al teacher (d = 0).
    When:  Se evalúa L_u con reducción suma.
    Then:  2·(-log 1e-8) + α·CE, finito.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    teacher = _oracle_net(2.0, Role.TEACHER)
    students = [_oracle_net(2.0), _oracle_net(2.0)]

    # ─── ACT ────────────────────────────────────────────────────────────────────
    loss = adversarial_loss(teacher, students, X, 0, "manhattan", alpha=0.1)

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    expected = 2 * -math.log(1e-8) + 0.1 * TEACHER_CE
    assert loss == pytest.approx(expected, rel=1e-5)
    assert math.isfinite(loss)


def test_mean_reduction_should_divide_distance_term_by_k():
    teacher = _oracle_net(2.0, Role.TEACHER)
    students = [_oracle_net(2.0), _oracle_net(2.0)]

    loss = adversarial_loss(teacher, students, X, 0, "manhattan", 0.1, reduction=Reduction.MEAN)

    assert loss == pytest.approx(-math.log(1e-8) + 0.1 * TEACHER_CE, rel=1e-5)


def test_zero_alpha_should_drop_teacher_cross_entropy():
    teacher = _oracle_net(2.0, Role.TEACHER)

    loss = adversarial_loss(teacher, [_oracle_net(2.0 - math.e)], X, 1, "manhattan", alpha=0.0)

    assert loss == pytest.approx(-1.0, rel=1e-5)  # -log(e)


def test_adversarial_loss_without_students_should_raise():
    with pytest.raises(ValueError, match="al menos un checkpoint"):
        adversarial_loss(_oracle_net(2.0), [], X, 0, "manhattan", 0.1)


# ==============================================================================
# === Casos de Prueba: Fase del student ===
# ==============================================================================


def test_student_phase_should_return_k_checkpoints_at_scheduled_epochs(tiny_pool, blobs_train):
    cfg = DistillConfig(epochs=6, checkpoints=3, eta=0.05)

    checkpoints = student_phase(tiny_pool.teachers[0], blobs_train.images[:6], cfg, seed=1)

    assert [c.meta.epoch for c in checkpoints] == [2, 4, 6]
    assert all(c.meta.role is Role.STUDENT for c in checkpoints)


def test_student_copying_teacher_should_stay_unchanged(tiny_pool, blobs_train):
    """
    Given: Un student inicializado con los pesos exactos del teacher.
    When:  Se ejecuta la fase del student con L1.
    Then:  L_θ = 0 en cada época y los checkpoints conservan los parámetros.
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    teacher = tiny_pool.teachers[0]
    student = teacher.with_params(dict(teacher.params), role=Role.STUDENT, epoch=0)
    cfg = DistillConfig(epochs=4, checkpoints=2, eta=0.05, metric="manhattan")
    trace: list[float] = []

    # ─── ACT ────────────────────────────────────────────────────────────────────
    checkpoints = student_phase(teacher, blobs_train.images[:6], cfg, student=student, loss_trace=trace)

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert trace == [0.0] * 4
    for ckpt in checkpoints:
        for name, value in teacher.params.items():
            np.testing.assert_array_equal(ckpt.params[name], value)


def test_student_loss_should_decrease_over_epochs(tiny_pool, blobs_train):
    trace: list[float] = []
    cfg = DistillConfig(epochs=20, checkpoints=1, eta=0.05)

    student_phase(tiny_pool.teachers[0], blobs_train.images[:6], cfg, seed=0, loss_trace=trace)

    assert len(trace) == 20
    assert trace[-1] < trace[0]


def test_student_phase_should_be_deterministic(tiny_pool, blobs_train):
    cfg = DistillConfig(epochs=4, checkpoints=2, eta=0.05)
    teacher = tiny_pool.teachers[1]

    a = student_phase(teacher, blobs_train.images[:6], cfg, seed=3)
    b = student_phase(teacher, blobs_train.images[:6], cfg, seed=3)

    assert all(x.equals(y) for x, y in zip(a, b, strict=True))
