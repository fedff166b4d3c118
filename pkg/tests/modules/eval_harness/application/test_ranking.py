# tests/modules/eval_harness/application/test_ranking.py
"""
Tests para: ranking.py (spearman, familia NAS, nas_rank)
Tipo: Unitario
Arquitectura: AAA (Arrange-Act-Assert) + Given-When-Then
Protocolos: Oráculo contra scipy.stats.spearmanr
"""

import numpy as np
import pytest
from scipy.stats import spearmanr

# === 🧪 Protocolos de Calidad Obligatorios ===
# 🔒 DOMINIO PURO: Tests sin I/O ni mocks. Solo lógica de negocio.
# 🔤 DETERMINISMO: Sin aleatoriedad sin seed controlado.
from prediction_distiller.modules.eval_harness import (
    MIN_FAMILY_SIZE,
    InvalidScoresError,
    default_nas_family,
    nas_rank,
    random_subset_set,
    spearman,
    spearman_details,
)

# ==============================================================================
# === Casos de Prueba: Spearman ===
# ==============================================================================


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ([1, 2, 3, 4, 5], [10, 20, 30, 40, 50], 1.0),
        ([1, 2, 3, 4, 5], [5, 4, 3, 2, 1], -1.0),
        ([1, 2, 3, 4, 5], [2, 1, 4, 3, 5], 0.8),
    ],
)
def test_spearman_should_match_known_values(a, b, expected):
    assert spearman(a, b) == pytest.approx(expected)


def test_spearman_with_ties_should_agree_with_scipy(rng):
    """
    Given: Puntuaciones con empates.
    When:  Se calcula ρ.
    Then:  Coincide con scipy.stats.spearmanr (rango promedio).
    """
    for _ in range(20):
        # ─── ARRANGE ────────────────────────────────────────────────────────────
        a = rng.integers(0, 4, size=8).astype(float)
        b = rng.integers(0, 4, size=8).astype(float)
        if np.ptp(a) == 0 or np.ptp(b) == 0:
            continue

        # ─── ACT & ASSERT ───────────────────────────────────────────────────────
        assert spearman(a, b) == pytest.approx(spearmanr(a, b).statistic, abs=1e-12)


def _brute_force_ranks(values: list[float]) -> list[float]:
    """1 + #menores + (#iguales - 1) / 2, sin ordenar."""
    return [1 + sum(w < v for w in values) + (sum(w == v for w in values) - 1) / 2 for v in values]


def _brute_force_rho(a: list[float], b: list[float]) -> float:
    ra, rb = _brute_force_ranks(a), _brute_force_ranks(b)
    ma, mb = sum(ra) / len(ra), sum(rb) / len(rb)
    cov = sum((x - ma) * (y - mb) for x, y in zip(ra, rb, strict=True))
    var_a = sum((x - ma) ** 2 for x in ra)
    var_b = sum((y - mb) ** 2 for y in rb)
    return 0.0 if var_a == 0 or var_b == 0 else cov / (var_a * var_b) ** 0.5


def test_spearman_should_match_brute_force_formula_on_random_cases():
    """
    Given: 1000 pares aleatorios de 2 a 12 puntuaciones, con empates frecuentes.
    When:  Se calcula ρ.
    Then:  Coincide con la fórmula de rangos por conteo.
    """
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n = int(rng.integers(2, 13))
        a = rng.integers(0, 5, size=n).astype(float).tolist()
        b = rng.integers(0, 5, size=n).astype(float).tolist()

        assert spearman(a, b) == pytest.approx(_brute_force_rho(a, b), abs=1e-12)


def test_constant_scores_should_be_degenerate_with_zero_rho():
    rho, degenerate = spearman_details([0.5, 0.5, 0.5], [1.0, 2.0, 3.0])

    assert rho == 0.0
    assert degenerate


@pytest.mark.parametrize("a, b", [([1.0, 2.0], [1.0]), ([1.0], [1.0])])
def test_invalid_score_lists_should_raise(a, b):
    with pytest.raises(InvalidScoresError):
        spearman(a, b)


# ==============================================================================
# === Casos de Prueba: Familia NAS ===
# ==============================================================================


def test_nas_family_should_cover_widths_and_depths_for_mnist_shape():
    family = default_nas_family((1, 28, 28), 10)

    assert len(family) == 12
    assert {a.width for a in family} == {8, 16, 32, 64}
    assert {a.depth for a in family} == {1, 2, 3}


def test_nas_family_should_skip_depths_the_input_cannot_pool():
    family = default_nas_family((1, 4, 4), 3)

    assert {a.depth for a in family} == {1, 2}


def test_nas_rank_should_reject_small_families(blobs_train, blobs_test, tiny_arch, rng):
    synset = random_subset_set(blobs_train, 2, rng)

    with pytest.raises(InvalidScoresError, match=str(MIN_FAMILY_SIZE)):
        nas_rank([tiny_arch] * (MIN_FAMILY_SIZE - 1), synset, blobs_train, blobs_test, 1, 1, [0])
