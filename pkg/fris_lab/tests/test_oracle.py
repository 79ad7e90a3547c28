import itertools

import numpy as np
import pytest

from models.solution import CeoConfig, PhaseVector
from models.surface import SurfaceGrid
from optimizers.baselines import quantized_alignment_phases, ris_baseline
from optimizers.ceo import optimize
from optimizers.oracle import exhaustive_search, search_size
from physics.channel import cascaded_coefficients
from physics.rate import achievable_rate
from utils.errors import BudgetExceededError, InvalidInputError


def brute_force(ch, radio, m_hat, bits, subsets):
    return max(
        achievable_rate(cascaded_coefficients(ch, subset), PhaseVector(levels, bits), radio)
        for subset in subsets
        for levels in itertools.product(range(1, 2 ** bits + 1), repeat=m_hat)
    )


def test_two_elements_one_bit(iid_channel, unit_radio):
    ch = iid_channel(2, 0)
    result = exhaustive_search(ch, unit_radio, 1, 1)
    assert result.evaluations == 4
    rates = [
        achievable_rate(cascaded_coefficients(ch, [m]), PhaseVector([v], 1), unit_radio)
        for m in (0, 1)
        for v in (1, 2)
    ]
    assert result.best_rate == pytest.approx(max(rates), abs=1e-12)


def test_full_selection_against_alignment(iid_channel, unit_radio):
    ch = iid_channel(3, 6)
    result = exhaustive_search(ch, unit_radio, 3, 1)
    assert result.evaluations == 8
    np.testing.assert_array_equal(result.best_xi, [1, 1, 1])
    c = cascaded_coefficients(ch, [0, 1, 2])
    aligned = achievable_rate(c, quantized_alignment_phases(c, 1), unit_radio)
    assert result.best_rate >= aligned - 1e-12


def test_budget_guard(iid_channel, unit_radio):
    assert search_size(8, 3, 1) == 448
    with pytest.raises(BudgetExceededError, match="448"):
        exhaustive_search(iid_channel(8, 0), unit_radio, 3, 1, budget=10)


def test_rejects_infeasible_m_hat(iid_channel, unit_radio):
    with pytest.raises(InvalidInputError):
        exhaustive_search(iid_channel(3, 0), unit_radio, 4, 1)


def test_result_is_consistent_and_order_independent(iid_channel, unit_radio):
    ch = iid_channel(6, 12)
    result = exhaustive_search(ch, unit_radio, 2, 2)
    assert result.evaluations == 15 * 16
    recomputed = achievable_rate(cascaded_coefficients(ch, np.flatnonzero(result.best_xi)), result.best_phi, unit_radio)
    assert result.best_rate == pytest.approx(recomputed, rel=1e-12)
    reversed_subsets = list(itertools.combinations(range(6), 2))[::-1]
    assert result.best_rate == pytest.approx(brute_force(ch, unit_radio, 2, 2, reversed_subsets), rel=1e-12)


def test_repeat_search_is_identical(iid_channel, unit_radio):
    ch = iid_channel(5, 3)
    first = exhaustive_search(ch, unit_radio, 3, 1)
    again = exhaustive_search(ch, unit_radio, 3, 1)
    assert first.best_rate == again.best_rate
    np.testing.assert_array_equal(first.best_xi, again.best_xi)
    np.testing.assert_array_equal(first.best_phi.levels, again.best_phi.levels)


def test_oracle_dominates_ceo_and_baseline(iid_channel, unit_radio):
    grid = SurfaceGrid(my=3, mz=3, spacing_m=0.01, wavelength_m=0.06)
    config = CeoConfig(sample_count_a=60)
    for seed in range(10):
        ch = iid_channel(9, seed)
        oracle = exhaustive_search(ch, unit_radio, 3, 1).best_rate
        fris, _ = optimize(ch, unit_radio, 3, 1, config, np.random.default_rng(seed))
        ris = ris_baseline(ch, unit_radio, grid, 3, 1, config, np.random.default_rng(seed))
        assert oracle >= fris.rate - 1e-9
        assert oracle >= ris.best.rate - 1e-9
