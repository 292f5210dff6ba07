"""
Closed-form key-sharing and edge probabilities of the composite graph,
plus the finite-n connectivity threshold scan.
"""

import logging
import math
from typing import Sequence, Tuple

import numpy as np

from app.models.params import ChannelMatrix, ClassDistribution, KeyProfile, SystemParams, check_offsets
from app.models.results import DerivedProbabilities
from app.utils.errors import NoThresholdError, ParameterError

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-12


def _check_index(i: int, r: int) -> int:
    if not 1 <= i <= r:
        raise ParameterError(f"class index {i} out of range 1..{r}")
    return i - 1


def log_avoid_prob(k_fixed: int, k_drawn: int, pool: int) -> float:
    """log C(P - k_fixed, k_drawn) / C(P, k_drawn), as a sum of log1p terms."""
    if k_fixed + k_drawn > pool:
        return -math.inf
    if k_fixed == 0 or k_drawn == 0:
        return 0.0
    ell = np.arange(k_drawn, dtype=float)
    return float(np.sum(np.log1p(-k_fixed / (pool - ell))))


def key_share_prob(k_a: int, k_b: int, pool: int) -> float:
    if k_a > pool or k_b > pool:
        raise ParameterError(f"ring size exceeds pool size {pool}")
    if k_a + k_b > pool:
        return 1.0
    # loop over the smaller ring so the result is exactly symmetric
    small, large = sorted((k_a, k_b))
    return -math.expm1(log_avoid_prob(large, small, pool))


def pairwise_key_prob(i: int, j: int, keys: KeyProfile) -> float:
    """Probability that a class-i and a class-j ring share at least one key."""
    a = _check_index(i, keys.r)
    b = _check_index(j, keys.r)
    return key_share_prob(keys.K[a], keys.K[b], keys.P)


def key_prob_matrix(keys: KeyProfile) -> np.ndarray:
    r = keys.r
    p = np.empty((r, r), dtype=float)
    for a in range(r):
        for b in range(a, r):
            p[a, b] = p[b, a] = key_share_prob(keys.K[a], keys.K[b], keys.P)
    return p


def mean_key_prob(i: int, params: SystemParams) -> float:
    a = _check_index(i, params.r)
    row = key_prob_matrix(params.keys)[a]
    return math.fsum(mu * p for mu, p in zip(params.dist.mu, row))


def mean_edge_prob(i: int, params: SystemParams) -> float:
    a = _check_index(i, params.r)
    row = key_prob_matrix(params.keys)[a]
    return math.fsum(mu * alpha * p for mu, alpha, p in zip(params.dist.mu, params.channel.alpha[a], row))


def _first_min(values: np.ndarray) -> int:
    best = float(np.min(values))
    slack = TIE_TOLERANCE * max(1.0, abs(best))
    return int(np.flatnonzero(values <= best + slack)[0])


def _first_max(values: np.ndarray) -> int:
    best = float(np.max(values))
    slack = TIE_TOLERANCE * max(1.0, abs(best))
    return int(np.flatnonzero(values >= best - slack)[0])


def derive_all(params: SystemParams) -> DerivedProbabilities:
    """Fill p, lambda, Lambda and the argmin/argmax class indices (ties -> lowest index)."""
    p = key_prob_matrix(params.keys)
    mu = params.dist.as_array()
    alpha = params.channel.as_array()
    lam = np.array([math.fsum(mu * p[a]) for a in range(params.r)])
    Lam = np.array([math.fsum(mu * alpha[a] * p[a]) for a in range(params.r)])
    m = _first_min(Lam)
    d = _first_max(alpha[m])
    s = _first_max(alpha[m] * p[m])
    for array in (p, lam, Lam):
        array.setflags(write=False)
    return DerivedProbabilities(
        p=p,
        lam=lam,
        Lam=Lam,
        m=m + 1,
        d=d + 1,
        s=s + 1,
        alpha_min=float(alpha.min()),
        alpha_max=float(alpha.max()),
    )


def satisfies_threshold(n: int, lambda_m: float) -> bool:
    """n * Lambda_m > log n, the finite-n connectivity criterion."""
    return n * lambda_m > math.log(n)


def scaling_constant(n: int, lambda_m: float) -> float:
    """c_n = n * Lambda_m / log n."""
    return n * lambda_m / math.log(n)


def expected_isolated(n: int, params: SystemParams, derived: DerivedProbabilities) -> float:
    """Mean number of degree-0 nodes, sum_i n mu_i (1 - Lambda_i)^(n-1)."""
    return math.fsum(
        n * mu * math.exp((n - 1) * math.log1p(-Lam)) if Lam < 1.0 else 0.0
        for mu, Lam in zip(params.dist.mu, derived.Lam)
    )


def critical_k1(n: int, dist: ClassDistribution, channel: ChannelMatrix,
                ring_offsets: Sequence[int], P: int) -> int:
    """Smallest K_1 with n * Lambda_m > log n, where K_j = K_1 + offset_j."""
    if n < 2:
        raise ParameterError("critical K_1 needs n >= 2")
    try:
        offsets = check_offsets(ring_offsets)
    except ValueError as e:
        raise ParameterError(str(e)) from e
    if len(offsets) != dist.r:
        raise ParameterError(f"expected {dist.r} ring offsets, got {len(offsets)}")

    def lambda_m_at(k1: int) -> float:
        params = SystemParams(
            dist=dist,
            keys=KeyProfile(K=tuple(k1 + o for o in offsets), P=P),
            channel=channel,
        )
        return derive_all(params).lambda_m

    top = P - offsets[-1]
    if top < 1:
        raise NoThresholdError(f"offsets {offsets} leave no room in a pool of {P}")
    # Lambda_m is non-decreasing in K_1, so a miss at the top means no solution at all
    top_lambda = lambda_m_at(top)
    if not satisfies_threshold(n, top_lambda):
        raise NoThresholdError(
            f"no K_1 <= {top} reaches n*Lambda_m > log n (Lambda_m at K_1={top} is {top_lambda:.6g})",
            last_lambda_m=top_lambda,
        )
    for k1 in range(1, top + 1):
        if satisfies_threshold(n, lambda_m_at(k1)):
            logger.debug(f"critical K_1={k1} for n={n}, offsets={offsets}, P={P}")
            return k1
    raise NoThresholdError("threshold scan ended without a solution")


def edge_prob_bounds(i: int, j: int, keys: KeyProfile) -> Tuple[float, float]:
    """(1 - exp(-K_i K_j / P), min(1, K_i K_j / (P - K_i))) bracketing p_ij."""
    a = _check_index(i, keys.r)
    b = _check_index(j, keys.r)
    k_i, k_j, pool = keys.K[a], keys.K[b], keys.P
    if k_i + k_j > pool:
        raise ParameterError(f"bounds need K_i + K_j <= P (got {k_i} + {k_j} > {pool})")
    product = k_i * k_j
    lower = -math.expm1(-product / pool)
    upper = min(1.0, product / (pool - k_i))
    return lower, upper


def combinatorial_bound_check(a: float, i: int, j: int, keys: KeyProfile) -> bool:
    """C(P - ceil(a K_i), K_j) / C(P, K_j) <= (C(P - K_i, K_j) / C(P, K_j)) ** a for a >= 1."""
    if not a >= 1:
        raise ParameterError(f"scalar a must be >= 1 (got {a!r})")
    x = _check_index(i, keys.r)
    y = _check_index(j, keys.r)
    k_i, k_j, pool = keys.K[x], keys.K[y], keys.P
    scaled = math.ceil(a * k_i)
    if scaled + k_j > pool:
        raise ParameterError(f"bound needs ceil(a K_i) + K_j <= P (got {scaled} + {k_j} > {pool})")
    lhs = log_avoid_prob(scaled, k_j, pool)
    rhs = a * log_avoid_prob(k_i, k_j, pool)
    return lhs <= rhs + TIE_TOLERANCE * max(1.0, abs(rhs))
