from fractions import Fraction
from math import comb

import numpy as np
import pytest

from app.models.params import KeyProfile, SystemParams
from app.models.results import SampledGraph
from app.services.oracle_service import (
    dfs_component_count,
    empirical_edge_freq,
    exhaustive_key_prob,
    exhaustive_key_prob_exact,
)
from app.services.probability_service import key_share_prob, pairwise_key_prob


def test_closed_form_matches_enumeration_for_small_pools():
    for pool in range(1, 13):
        for k_i in range(1, pool + 1):
            for k_j in range(k_i, pool + 1):
                keys = KeyProfile(K=(k_i, k_j), P=pool)
                assert pairwise_key_prob(1, 2, keys) == pytest.approx(
                    exhaustive_key_prob(k_i, k_j, pool), abs=1e-12
                ), (k_i, k_j, pool)


def test_enumeration_counts_disjoint_pairs():
    exact = exhaustive_key_prob_exact(2, 3, 7)
    assert exact == 1 - Fraction(comb(5, 3), comb(7, 3))
    assert exhaustive_key_prob_exact(2, 2, 5) == Fraction(7, 10)
    assert exhaustive_key_prob_exact(0, 3, 6) == 0
    assert exhaustive_key_prob_exact(4, 3, 6) == 1


def test_enumeration_limits():
    with pytest.raises(ValueError):
        exhaustive_key_prob_exact(2, 2, 13)
    with pytest.raises(ValueError):
        exhaustive_key_prob_exact(7, 2, 6)


def test_dfs_component_count():
    assert dfs_component_count(SampledGraph.from_edges(5, [(0, 1), (3, 4)])) == 3
    assert dfs_component_count(SampledGraph.from_edges(64, [(x, x + 1) for x in range(63)])) == 1
    with pytest.raises(ValueError):
        dfs_component_count(SampledGraph.from_edges(65, []))


def test_edge_freq_within_binomial_band():
    params = SystemParams.build((0.5, 0.5), (3, 4), 20, ((0.9, 0.5), (0.5, 0.7)))
    samples = 20_000
    observed = empirical_edge_freq(params, 1, 1, samples, np.random.default_rng(17))
    expected = 0.9 * key_share_prob(3, 3, 20)
    sigma = (expected * (1 - expected) / samples) ** 0.5
    assert abs(observed - expected) < 4 * sigma


def test_edge_freq_arguments():
    params = SystemParams.build((1.0,), (3,), 20, ((0.5,),))
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        empirical_edge_freq(params, 1, 1, 100, rng)
    with pytest.raises(ValueError):
        empirical_edge_freq(params, 1, 2, 10_000, rng)
