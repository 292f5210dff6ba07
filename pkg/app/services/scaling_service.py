"""
Scaling families n -> (K_n, P_n, alpha_n) and their finite-n diagnostics.

Every quantity reported here is a number at a finite n. The hypotheses the
families are meant to satisfy are limit statements, so reports carry trends
(min, max, direction over the grid) and never a pass/fail verdict.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

from app.models.params import ClassDistribution, SystemParams
from app.models.results import (
    DIAGNOSTIC_FIELDS,
    ConditionPoint,
    ConditionReport,
    LemmaPoint,
    TrendSummary,
)
from app.services.probability_service import derive_all, scaling_constant
from app.utils.errors import ParameterError, ScalingError

logger = logging.getLogger(__name__)

AlphaMinRule = Callable[[int], float]
DEFAULT_TAU = 2.0


@dataclass(frozen=True)
class FamilyPoint:
    """Raw evaluation of a family's rules at one n, before any validation"""
    n: int
    K: Tuple[int, ...]
    P: int
    alpha: Tuple[Tuple[float, ...], ...]


@dataclass(frozen=True)
class ScalingFamily:
    name: str
    mu: ClassDistribution
    rule: Callable[[int], FamilyPoint]
    parameters: Dict[str, float] = field(default_factory=dict)

    @property
    def r(self) -> int:
        return self.mu.r

    def evaluate(self, n: int) -> FamilyPoint:
        if n < 2:
            raise ParameterError(f"scaling families are defined for n >= 2 (got {n})")
        return self.rule(n)

    def materialize(self, n: int) -> SystemParams:
        """Validated parameters at n; K ordering, K_r <= P/2 and alpha in (0, 1) are enforced."""
        point = self.evaluate(n)
        try:
            params = SystemParams.build(self.mu.mu, point.K, point.P, point.alpha)
            params.ensure_strict()
        except ValueError as e:
            raise ScalingError(str(e), n) from e
        return params


def two_class_example_family(epsilon: float, mu: ClassDistribution,
                             alpha_min_rule: AlphaMinRule) -> ScalingFamily:
    """
    Two-class family meeting every connectivity hypothesis for 0 < epsilon < 1/2:
    P_n = ceil(n log n),
    K_1 = ceil((log n)^(1/2+eps) / sqrt(a_n)),
    K_2 = ceil((1+eps) (log n)^(3/2-eps) / (mu_2 sqrt(a_n))),
    alpha = a_n [[(1+eps)(log n)^(1-2eps)/mu_1, 1], [1, mu_2 (log n)^(1+2eps)/(1+eps)]]
    with a_n = alpha_min_rule(n).
    """
    if not 0 < epsilon < 0.5:
        raise ParameterError(f"epsilon must lie in (0, 0.5) (got {epsilon!r})")
    if mu.r != 2:
        raise ParameterError(f"the example family has two classes (got r={mu.r})")
    mu_1, mu_2 = mu.mu

    def rule(n: int) -> FamilyPoint:
        log_n = math.log(n)
        a_n = alpha_min_rule(n)
        if not a_n > 0:
            raise ScalingError(f"alpha_min rule returned {a_n!r}", n)
        root = math.sqrt(a_n)
        k1 = math.ceil(log_n ** (0.5 + epsilon) / root)
        k2 = math.ceil((1 + epsilon) * log_n ** (1.5 - epsilon) / (mu_2 * root))
        a11 = a_n * (1 + epsilon) * log_n ** (1 - 2 * epsilon) / mu_1
        a22 = a_n * mu_2 * log_n ** (1 + 2 * epsilon) / (1 + epsilon)
        return FamilyPoint(
            n=n,
            K=(k1, k2),
            P=math.ceil(n * log_n),
            alpha=((a11, a_n), (a_n, a22)),
        )

    return ScalingFamily(
        name="two-class-example",
        mu=mu,
        rule=rule,
        parameters={'epsilon': epsilon, 'tau_implied': 1 + 2 * epsilon},
    )


def fixed_keys_family(mu: ClassDistribution, K: Sequence[int], P: int,
                      alpha_rule: Callable[[int], Sequence[Sequence[float]]],
                      name: str = "fixed-keys") -> ScalingFamily:
    """Ring sizes and pool held fixed while the channel matrix follows alpha_rule(n)."""
    K = tuple(K)

    def rule(n: int) -> FamilyPoint:
        alpha = tuple(tuple(float(a) for a in row) for row in alpha_rule(n))
        return FamilyPoint(n=n, K=K, P=P, alpha=alpha)

    return ScalingFamily(name=name, mu=mu, rule=rule)


def constant_family(params: SystemParams) -> ScalingFamily:
    return fixed_keys_family(
        params.dist, params.keys.K, params.keys.P, lambda n: params.channel.alpha, name="constant",
    )


def _check_grid(grid: Sequence[int]) -> List[int]:
    grid = [int(n) for n in grid]
    if not grid:
        raise ParameterError("grid must not be empty")
    if any(n < 3 for n in grid):
        raise ParameterError("grid points must be >= 3 so that log log n is defined")
    if any(a >= b for a, b in zip(grid, grid[1:])):
        raise ParameterError("grid must be strictly increasing")
    return grid


def condition_point(family: ScalingFamily, n: int, tau: float) -> ConditionPoint:
    params = family.materialize(n)
    derived = derive_all(params)
    log_n = math.log(n)
    r = params.r
    m = derived.m
    alpha = params.channel.alpha
    p_1r = float(derived.p[0, r - 1])
    return ConditionPoint(
        n=n,
        K1=params.keys.K[0],
        Kr=params.keys.K[-1],
        P=params.keys.P,
        m=m,
        lambda_m=derived.lambda_m,
        c_n=scaling_constant(n, derived.lambda_m),
        pool_ratio=params.keys.P / n,
        edge_floor=n * derived.alpha_min * p_1r / log_n,
        key_spread=(params.keys.K[-1] / params.keys.K[0]) / log_n,
        channel_spread=(derived.alpha_max / derived.alpha_min) / log_n ** tau,
        alpha_md_log=alpha[m - 1][derived.d - 1] * log_n,
        alpha_mm_log=alpha[m - 1][m - 1] * log_n,
    )


def evaluate_conditions(family: ScalingFamily, grid: Sequence[int], tau: float = DEFAULT_TAU) -> ConditionReport:
    if not tau > 0:
        raise ParameterError(f"tau must be positive (got {tau!r})")
    grid = _check_grid(grid)
    points = []
    for n in grid:
        try:
            points.append(condition_point(family, n, tau))
        except ScalingError as e:
            logger.error(f"Error materializing {family.name}: {str(e)}")
            raise
    trends = {name: TrendSummary.of([getattr(p, name) for p in points]) for name in DIAGNOSTIC_FIELDS}
    return ConditionReport(family=family.name, tau=tau, points=tuple(points), trends=trends)


def lemma_diagnostics(family: ScalingFamily, grid: Sequence[int]) -> List[LemmaPoint]:
    """n * alpha_min * p_1r / log n (bounded when the edge floor holds) and K_1 (must grow)."""
    grid = _check_grid(grid)
    out = []
    for n in grid:
        params = family.materialize(n)
        derived = derive_all(params)
        p_1r = float(derived.p[0, params.r - 1])
        out.append(LemmaPoint(
            n=n,
            edge_floor=n * derived.alpha_min * p_1r / math.log(n),
            K1=params.keys.K[0],
        ))
    return out
