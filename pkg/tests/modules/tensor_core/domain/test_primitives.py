# tests/modules/tensor_core/domain/test_primitives.py
"""
Tests para: primitives.py (semántica de forward/backward sobre valores conocidos)
Tipo: Unitario
Arquitectura: AAA (Arrange-Act-Assert) + Given-When-Then
Protocolos: Pureza de dominio, Determinismo
"""

import numpy as np
import pytest

# === 🧪 Protocolos de Calidad Obligatorios ===
# 🔒 DOMINIO PURO: Tests sin I/O ni mocks. Solo lógica de negocio.
# 🔤 DETERMINISMO: Sin aleatoriedad sin seed controlado.
from prediction_distiller.modules.tensor_core import (
    Graph,
    ShapeMismatchError,
    forward,
    value_and_grad,
)


def _unary(op_name: str, **kwargs):
    g = Graph()
    x = g.input("x")
    g.set_output(getattr(g, op_name)(x, **kwargs))
    return g


# ==============================================================================
# === Casos de Prueba: Elementwise ===
# ==============================================================================


def test_relu_should_zero_negatives():
    """
    Given: x = [-1, 0, 2].
    When:  Se evalúa relu.
    Then:  Devuelve [0, 0, 2].
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    g = _unary("relu")

    # ─── ACT ────────────────────────────────────────────────────────────────────
    out, _ = forward(g, {"x": np.array([-1.0, 0.0, 2.0], dtype=np.float32)})

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    np.testing.assert_array_equal(out, [0.0, 0.0, 2.0])


def test_sum_of_squares_gradient_should_be_twice_x():
    """
    Given: f(x) = sum(x * x) con x = [1, 2].
    When:  Se calcula el gradiente respecto a x.
    Then:  Es [2, 4].
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    g = Graph()
    x = g.input("x")
    g.set_output(g.sum(g.mul(x, x)))

    # ─── ACT ────────────────────────────────────────────────────────────────────
    value, grads = value_and_grad(g, {"x": np.array([1.0, 2.0], dtype=np.float32)}, ["x"])

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert value == pytest.approx(5.0)
    np.testing.assert_allclose(grads["x"], [2.0, 4.0])


def test_clamp_min_should_pass_gradient_only_above_floor():
    g = Graph()
    x = g.input("x")
    g.set_output(g.sum(g.clamp_min(x, 1.0)))

    value, grads = value_and_grad(g, {"x": np.array([0.5, 2.0])}, ["x"])

    assert value == pytest.approx(3.0)
    np.testing.assert_array_equal(grads["x"], [0.0, 1.0])


def test_binary_ops_should_broadcast_and_unbroadcast_gradients():
    g = Graph()
    a, b = g.input("a"), g.input("b")
    g.set_output(g.sum(g.add(a, b)))

    _, grads = value_and_grad(g, {"a": np.ones((3, 2)), "b": np.ones((1, 2))}, ["a", "b"])

    assert grads["b"].shape == (1, 2)
    np.testing.assert_array_equal(grads["b"], [[3.0, 3.0]])


def test_binary_ops_should_reject_incompatible_shapes():
    g = Graph()
    g.set_output(g.add(g.input("a"), g.input("b")))

    with pytest.raises(ShapeMismatchError):
        forward(g, {"a": np.ones((3, 2)), "b": np.ones((4,))})


# ==============================================================================
# === Casos de Prueba: Pooling y convolución ===
# ==============================================================================


def test_avg_pool2_should_crop_odd_rows_and_columns():
    """
    Given: Un mapa 3x3 con valores 0..8.
    When:  Se aplica avg_pool2.
    Then:  Sale 1x1 con la media del bloque 2x2 superior izquierdo (0,1,3,4 -> 2).
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    g = _unary("avg_pool2")
    x = np.arange(9, dtype=np.float32).reshape(1, 1, 3, 3)

    # ─── ACT ────────────────────────────────────────────────────────────────────
    out, _ = forward(g, {"x": x})

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert out.shape == (1, 1, 1, 1)
    assert out.item() == pytest.approx(2.0)


def test_conv2d_with_identity_kernel_should_copy_input():
    g = Graph()
    g.set_output(g.conv2d(g.input("x"), g.input("w"), g.input("b"), stride=1, pad=1))
    x = np.arange(16, dtype=np.float32).reshape(1, 1, 4, 4)
    w = np.zeros((1, 1, 3, 3), dtype=np.float32)
    w[0, 0, 1, 1] = 1.0

    out, _ = forward(g, {"x": x, "w": w, "b": np.zeros(1, dtype=np.float32)})

    np.testing.assert_array_equal(out, x)


def test_conv2d_stride_should_halve_spatial_size():
    g = Graph()
    g.set_output(g.conv2d(g.input("x"), g.input("w"), g.input("b"), stride=2, pad=1))

    out, _ = forward(
        g,
        {"x": np.ones((2, 3, 6, 6)), "w": np.ones((5, 3, 3, 3)), "b": np.zeros(5)},
    )

    assert out.shape == (2, 5, 3, 3)


def test_instance_norm_should_standardize_each_sample_and_channel():
    g = Graph()
    g.set_output(g.instance_norm(g.input("x"), g.input("gamma"), g.input("beta")))
    x = np.random.default_rng(0).normal(3.0, 2.0, size=(4, 2, 5, 5))

    out, _ = forward(g, {"x": x, "gamma": np.ones(2), "beta": np.zeros(2)})

    np.testing.assert_allclose(out.mean(axis=(2, 3)), 0.0, atol=1e-9)
    np.testing.assert_allclose(out.std(axis=(2, 3)), 1.0, atol=1e-3)


# ==============================================================================
# === Casos de Prueba: Softmax y pérdidas ===
# ==============================================================================


def test_softmax_rows_should_sum_to_one():
    g = _unary("softmax")
    z = np.random.default_rng(1).normal(size=(7, 10)).astype(np.float32)

    out, _ = forward(g, {"x": z})

    np.testing.assert_allclose(out.sum(axis=1), 1.0, atol=1e-6)


def test_cross_entropy_should_equal_negative_log_softmax_of_label():
    """
    Given: Logits aleatorios y etiquetas enteras.
    When:  Se evalúa cross_entropy.
    Then:  Coincide con -log(softmax(z))[y] fila a fila (1e-6).
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    g = Graph()
    g.set_output(g.cross_entropy(g.input("z"), g.input("y")))
    z = np.random.default_rng(2).normal(size=(5, 4))
    y = np.array([0, 3, 1, 2, 3])

    # ─── ACT ────────────────────────────────────────────────────────────────────
    out, _ = forward(g, {"z": z, "y": y})

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    probs = np.exp(z) / np.exp(z).sum(axis=1, keepdims=True)
    np.testing.assert_allclose(out, -np.log(probs[np.arange(5), y]), atol=1e-6)


def test_cross_entropy_should_reject_out_of_range_labels():
    g = Graph()
    g.set_output(g.cross_entropy(g.input("z"), g.input("y")))

    with pytest.raises(ShapeMismatchError, match="fuera de rango"):
        forward(g, {"z": np.zeros((2, 3)), "y": np.array([0, 3])})


# ==============================================================================
# === Casos de Prueba: Distancias entre logits ===
# ==============================================================================


def _distance_graph(metric: str) -> Graph:
    g = Graph()
    return g.set_output(g.sum(g.distance(metric, g.input("a"), g.input("b"))))


def test_l1_gradient_should_be_sign_with_zero_at_ties():
    """
    Given: a = [[1, -2, 3]] y b = [[0, 0, 3]] (empate en la última coordenada).
    When:  Se calcula ∂|a-b|₁/∂a.
    Then:  Es sign(a-b) = [1, -1, 0].
    """
    # ─── ARRANGE ────────────────────────────────────────────────────────────────
    g = _distance_graph("manhattan")
    a = np.array([[1.0, -2.0, 3.0]])
    b = np.array([[0.0, 0.0, 3.0]])

    # ─── ACT ────────────────────────────────────────────────────────────────────
    value, grads = value_and_grad(g, {"a": a, "b": b}, ["a", "b"])

    # ─── ASSERT ─────────────────────────────────────────────────────────────────
    assert value == pytest.approx(3.0)
    np.testing.assert_array_equal(grads["a"], [[1.0, -1.0, 0.0]])
    np.testing.assert_array_equal(grads["b"], [[-1.0, 1.0, 0.0]])


def test_euclidean_distance_should_be_zero_gradient_at_identity():
    g = _distance_graph("euclidean")
    a = np.array([[3.0, 4.0], [1.0, 1.0]])
    b = np.array([[0.0, 0.0], [1.0, 1.0]])

    value, grads = value_and_grad(g, {"a": a, "b": b}, ["a"])

    assert value == pytest.approx(5.0)
    np.testing.assert_allclose(grads["a"], [[0.6, 0.8], [0.0, 0.0]])


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ([1.0, 0.0], [0.0, 1.0], 1.0),
        ([1.0, 2.0], [2.0, 4.0], 0.0),
        ([0.0, 0.0], [0.0, 0.0], 0.0),
        ([0.0, 0.0], [1.0, 2.0], 1.0),
    ],
)
def test_cosine_distance_should_apply_zero_vector_guards(a, b, expected):
    """Ortogonales -> 1; paralelos -> 0; ambos nulos -> 0; uno nulo -> 1."""
    g = _distance_graph("cosine")

    value, grads = value_and_grad(g, {"a": np.array([a]), "b": np.array([b])}, ["a"])

    assert value == pytest.approx(expected, abs=1e-12)
    if not any(a):
        np.testing.assert_array_equal(grads["a"], 0.0)


def test_distance_should_reject_length_mismatch():
    g = _distance_graph("manhattan")

    with pytest.raises(ShapeMismatchError):
        forward(g, {"a": np.zeros((1, 3)), "b": np.zeros((1, 4))})
