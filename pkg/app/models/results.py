from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from app.utils.errors import ParameterError


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class DerivedProbabilities:
    """Closed-form edge quantities for one parameter set (class indices 1-based)"""
    p: np.ndarray
    lam: np.ndarray
    Lam: np.ndarray
    m: int
    d: int
    s: int
    alpha_min: float
    alpha_max: float

    @property
    def lambda_m(self) -> float:
        return float(self.Lam[self.m - 1])

    def to_dict(self) -> dict:
        return {
            'p': self.p.tolist(),
            'lambda': self.lam.tolist(),
            'Lambda': self.Lam.tolist(),
            'm': self.m,
            'd': self.d,
            's': self.s,
            'alpha_min': self.alpha_min,
            'alpha_max': self.alpha_max,
            'lambda_m': self.lambda_m,
        }


@dataclass(frozen=True)
class NodeAssignment:
    """Class labels (1..r) and sorted key rings stored as one flat CSR layout"""
    classes: np.ndarray
    ring_ids: np.ndarray
    ring_ptr: np.ndarray
    pool: int

    @property
    def n(self) -> int:
        return int(self.classes.size)

    def ring(self, x: int) -> np.ndarray:
        return self.ring_ids[self.ring_ptr[x]:self.ring_ptr[x + 1]]

    @property
    def rings(self) -> List[np.ndarray]:
        return [self.ring(x) for x in range(self.n)]


@dataclass(frozen=True)
class SampledGraph:
    """Undirected simple graph; edges are (x, y) rows with x < y in lexicographic order"""
    n: int
    edges: np.ndarray
    degree: np.ndarray

    @classmethod
    def from_canonical(cls, n: int, edges: np.ndarray) -> "SampledGraph":
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        degree = np.bincount(edges.ravel(), minlength=n).astype(np.int64)
        return cls(n=n, edges=_frozen(edges), degree=_frozen(degree))

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[Tuple[int, int]]) -> "SampledGraph":
        """Build from arbitrary pairs; orientation and duplicates are normalized away."""
        edges = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if (edges[:, 0] == edges[:, 1]).any():
                raise ParameterError("self-loops are not allowed")
            if edges.min() < 0 or edges.max() >= n:
                raise ParameterError(f"edge endpoint outside 0..{n - 1}")
            edges = np.unique(np.sort(edges, axis=1), axis=0)
        return cls.from_canonical(n, edges)

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    def edge_set(self) -> Set[Tuple[int, int]]:
        return {(int(x), int(y)) for x, y in self.edges}

    def neighbors(self) -> List[List[int]]:
        adjacency: List[List[int]] = [[] for _ in range(self.n)]
        for x, y in self.edges.tolist():
            adjacency[x].append(y)
            adjacency[y].append(x)
        return adjacency


@dataclass(frozen=True)
class ComponentSummary:
    n: int
    component_count: int
    isolated_count: int
    largest_component: int

    @property
    def connected(self) -> bool:
        return self.component_count == 1

    @property
    def isolated_free(self) -> bool:
        return self.isolated_count == 0


@dataclass(frozen=True)
class TrialTally:
    """Counts over independent trials; merging is commutative and associative"""
    trials: int = 0
    connected_count: int = 0
    isolated_free_count: int = 0

    def __post_init__(self):
        if not 0 <= self.connected_count <= self.isolated_free_count <= self.trials:
            raise ParameterError(
                f"inconsistent tally: connected={self.connected_count}, "
                f"isolated_free={self.isolated_free_count}, trials={self.trials}"
            )

    def __add__(self, other: "TrialTally") -> "TrialTally":
        return TrialTally(
            trials=self.trials + other.trials,
            connected_count=self.connected_count + other.connected_count,
            isolated_free_count=self.isolated_free_count + other.isolated_free_count,
        )

    @classmethod
    def merge(cls, tallies: Iterable["TrialTally"]) -> "TrialTally":
        total = cls()
        for tally in tallies:
            total = total + tally
        return total

    @property
    def p_connected(self) -> float:
        return self.connected_count / self.trials if self.trials else 0.0

    @property
    def p_isolated_free(self) -> float:
        return self.isolated_free_count / self.trials if self.trials else 0.0

    @property
    def coincidence_rate(self) -> float:
        """Share of trials where both predicates agreed."""
        if not self.trials:
            return 1.0
        return 1.0 - (self.isolated_free_count - self.connected_count) / self.trials

    def to_dict(self) -> dict:
        return {
            'trials': self.trials,
            'connected_count': self.connected_count,
            'isolated_free_count': self.isolated_free_count,
            'p_connected': self.p_connected,
            'p_isolated_free': self.p_isolated_free,
        }


@dataclass(frozen=True)
class SweepRow:
    value: float
    n: int
    tally: TrialTally
    lambda_m: float
    c_n: float
    at_threshold: bool
    expected_isolated: float

    def to_dict(self) -> dict:
        return {
            'sweep_value': self.value,
            'n': self.n,
            **self.tally.to_dict(),
            'lambda_m': self.lambda_m,
            'c_n': self.c_n,
            'at_threshold': self.at_threshold,
            'expected_isolated': self.expected_isolated,
        }


@dataclass(frozen=True)
class SweepResult:
    axis: str
    rows: Tuple[SweepRow, ...]
    label: str = ""

    def first_threshold_value(self) -> Optional[float]:
        for row in self.rows:
            if row.at_threshold:
                return row.value
        return None

    def to_dict(self) -> dict:
        return {
            'axis': self.axis,
            'label': self.label,
            'rows': [row.to_dict() for row in self.rows],
        }


@dataclass(frozen=True)
class TrendSummary:
    minimum: float
    maximum: float
    direction: str  # increasing, decreasing, flat, mixed

    @classmethod
    def of(cls, values: List[float]) -> "TrendSummary":
        steps = [b - a for a, b in zip(values, values[1:])]
        if not steps or all(s == 0 for s in steps):
            direction = "flat"
        elif all(s > 0 for s in steps):
            direction = "increasing"
        elif all(s < 0 for s in steps):
            direction = "decreasing"
        else:
            direction = "mixed"
        return cls(minimum=min(values), maximum=max(values), direction=direction)

    def to_dict(self) -> dict:
        return {'min': self.minimum, 'max': self.maximum, 'direction': self.direction}


@dataclass(frozen=True)
class ConditionPoint:
    """Finite-n values of the scaling hypotheses; diagnostics, never verdicts"""
    n: int
    K1: int
    Kr: int
    P: int
    m: int
    lambda_m: float
    c_n: float
    pool_ratio: float
    edge_floor: float
    key_spread: float
    channel_spread: float
    alpha_md_log: float
    alpha_mm_log: float

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'K1': self.K1,
            'Kr': self.Kr,
            'P': self.P,
            'm': self.m,
            'lambda_m': self.lambda_m,
            'c_n': self.c_n,
            'pool_ratio': self.pool_ratio,
            'edge_floor': self.edge_floor,
            'key_spread': self.key_spread,
            'channel_spread': self.channel_spread,
            'alpha_md_log': self.alpha_md_log,
            'alpha_mm_log': self.alpha_mm_log,
        }


DIAGNOSTIC_FIELDS = (
    'c_n', 'pool_ratio', 'edge_floor', 'key_spread', 'channel_spread', 'alpha_md_log', 'alpha_mm_log',
)


@dataclass(frozen=True)
class ConditionReport:
    family: str
    tau: float
    points: Tuple[ConditionPoint, ...]
    trends: Dict[str, TrendSummary] = field(default_factory=dict)

    @property
    def grid(self) -> List[int]:
        return [point.n for point in self.points]

    @property
    def rho_hat(self) -> float:
        return min(point.edge_floor for point in self.points)

    @property
    def sigma_hat(self) -> float:
        return min(point.pool_ratio for point in self.points)

    def series(self, name: str) -> List[float]:
        return [getattr(point, name) for point in self.points]

    def to_dict(self) -> dict:
        return {
            'family': self.family,
            'tau': self.tau,
            'points': [point.to_dict() for point in self.points],
            'trends': {name: trend.to_dict() for name, trend in self.trends.items()},
            'rho_hat': self.rho_hat,
            'sigma_hat': self.sigma_hat,
        }


@dataclass(frozen=True)
class LemmaPoint:
    n: int
    edge_floor: float
    K1: int


@dataclass
class RunManifest:
    """Side file describing how a CSV was produced"""
    command: List[str]
    config_hash: str
    master_seed: int
    tool_version: str
    wall_time_seconds: float = 0.0
    outputs: List[str] = field(default_factory=list)
    created_at: Optional[datetime] = None

    def to_dict(self) -> dict:
        return {
            'command': self.command,
            'config_hash': self.config_hash,
            'master_seed': self.master_seed,
            'tool_version': self.tool_version,
            'wall_time_seconds': self.wall_time_seconds,
            'outputs': self.outputs,
            'created_at': self.created_at.isoformat() if self.created_at else None,
        }
