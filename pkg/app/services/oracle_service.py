"""
Brute-force reference computations used to cross-check the closed forms and
the fast graph code paths.
"""

import sys
from fractions import Fraction
from itertools import combinations
from typing import List

import numpy as np

from app.models.params import SystemParams
from app.models.results import SampledGraph
from app.services.sampler_service import sample_sorted_subsets
from app.utils.errors import ParameterError

MAX_ORACLE_POOL = 12
MAX_DFS_NODES = 64
MIN_EDGE_SAMPLES = 10_000


def _subset_masks(k: int, pool: int) -> np.ndarray:
    return np.array([sum(1 << key for key in ring) for ring in combinations(range(pool), k)], dtype=np.int64)


def exhaustive_key_prob_exact(k_i: int, k_j: int, pool: int) -> Fraction:
    if pool > MAX_ORACLE_POOL:
        raise ParameterError(f"exhaustive enumeration is limited to P <= {MAX_ORACLE_POOL} (got {pool})")
    if not (0 <= k_i <= pool and 0 <= k_j <= pool):
        raise ParameterError(f"ring sizes ({k_i}, {k_j}) must lie in 0..{pool}")
    rings_i = _subset_masks(k_i, pool)
    rings_j = _subset_masks(k_j, pool)
    intersecting = int(np.count_nonzero(np.bitwise_and.outer(rings_i, rings_j)))
    return Fraction(intersecting, rings_i.size * rings_j.size)


def exhaustive_key_prob(k_i: int, k_j: int, pool: int) -> float:
    """Fraction of all (K_i-subset, K_j-subset) pairs of a P-pool that intersect."""
    return float(exhaustive_key_prob_exact(k_i, k_j, pool))


def dfs_component_count(graph: SampledGraph) -> int:
    if graph.n > MAX_DFS_NODES:
        raise ParameterError(f"DFS oracle is limited to n <= {MAX_DFS_NODES} (got {graph.n})")
    adjacency = graph.neighbors()
    seen: List[bool] = [False] * graph.n

    def visit(x: int) -> None:
        seen[x] = True
        for y in adjacency[x]:
            if not seen[y]:
                visit(y)

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, graph.n + 100))
    try:
        count = 0
        for x in range(graph.n):
            if not seen[x]:
                count += 1
                visit(x)
    finally:
        sys.setrecursionlimit(limit)
    return count


def empirical_edge_freq(params: SystemParams, i: int, j: int, samples: int, rng: np.random.Generator) -> float:
    """Adjacency frequency over independent (class-i ring, class-j ring, channel coin) triples."""
    if samples < MIN_EDGE_SAMPLES:
        raise ParameterError(f"need at least {MIN_EDGE_SAMPLES} samples (got {samples})")
    if not (1 <= i <= params.r and 1 <= j <= params.r):
        raise ParameterError(f"class pair ({i}, {j}) out of range 1..{params.r}")
    pool = params.keys.P
    rings_i = sample_sorted_subsets(samples, params.keys.K[i - 1], pool, rng)
    rings_j = sample_sorted_subsets(samples, params.keys.K[j - 1], pool, rng)
    coins = rng.random(samples) < params.channel.alpha[i - 1][j - 1]
    # each ring is duplicate-free, so a repeat in the merged row is a shared key
    merged = np.sort(np.concatenate((rings_i, rings_j), axis=1), axis=1)
    shared = (np.diff(merged, axis=1) == 0).any(axis=1)
    return float(np.count_nonzero(coins & shared)) / samples
