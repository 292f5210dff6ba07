import math
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveInt,
    ValidationInfo,
    field_validator,
    model_validator,
)

from app.utils.errors import ParameterError

MU_TOLERANCE = 1e-12
MAX_SEED = 2**64


def check_distribution(mu: Sequence[float]) -> Tuple[float, ...]:
    mu = tuple(float(value) for value in mu)
    if not mu:
        raise ValueError("at least one class is required")
    if any(not math.isfinite(value) or value <= 0 for value in mu):
        raise ValueError("every class probability must be strictly positive")
    total = math.fsum(mu)
    if abs(total - 1.0) > MU_TOLERANCE:
        raise ValueError(f"class probabilities must sum to 1 (got {total!r})")
    return mu


def check_ring_sizes(K: Sequence[int], P: int) -> Tuple[int, ...]:
    K = tuple(int(k) for k in K)
    if any(k < 1 for k in K):
        raise ValueError("ring sizes must be positive")
    if any(a > b for a, b in zip(K, K[1:])):
        raise ValueError("ring sizes must be sorted non-decreasing (K_1 <= ... <= K_r)")
    if K and K[-1] > P:
        raise ValueError(f"ring size {K[-1]} exceeds pool size {P}")
    return K


def check_alpha_rows(rows: Sequence[Sequence[float]]) -> Tuple[Tuple[float, ...], ...]:
    rows = tuple(tuple(float(value) for value in row) for row in rows)
    r = len(rows)
    if r == 0 or any(len(row) != r for row in rows):
        raise ValueError("channel matrix must be square and non-empty")
    for row in rows:
        for value in row:
            if not math.isfinite(value) or value < 0.0 or value > 1.0:
                raise ValueError(f"channel probability {value!r} outside [0, 1]")
    for i in range(r):
        for j in range(i + 1, r):
            if rows[i][j] != rows[j][i]:
                raise ValueError(f"channel matrix must be symmetric (alpha[{i + 1}][{j + 1}] != alpha[{j + 1}][{i + 1}])")
    return rows


def check_offsets(offsets: Sequence[int]) -> Tuple[int, ...]:
    offsets = tuple(int(o) for o in offsets)
    if not offsets or offsets[0] != 0:
        raise ValueError("ring offsets must start with 0")
    if any(a > b for a, b in zip(offsets, offsets[1:])):
        raise ValueError("ring offsets must be non-decreasing")
    return offsets


class ClassDistribution(BaseModel):
    """Probability that a node falls into each of the r classes"""
    model_config = ConfigDict(frozen=True)

    mu: Tuple[float, ...] = Field(..., min_length=1)

    @field_validator("mu")
    @classmethod
    def _validate_mu(cls, mu):
        return check_distribution(mu)

    @property
    def r(self) -> int:
        return len(self.mu)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.mu, dtype=float)


class KeyProfile(BaseModel):
    """Per-class key ring sizes and the shared pool size"""
    model_config = ConfigDict(frozen=True)

    K: Tuple[PositiveInt, ...] = Field(..., min_length=1)
    P: PositiveInt

    @model_validator(mode="after")
    def _validate_sizes(self):
        check_ring_sizes(self.K, self.P)
        return self

    @property
    def r(self) -> int:
        return len(self.K)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.K, dtype=np.int64)

    def ensure_scaling(self) -> None:
        """Strict mode: the largest ring may hold at most half the pool."""
        if 2 * self.K[-1] > self.P:
            raise ParameterError(f"K_r={self.K[-1]} exceeds P/2={self.P / 2:g}")


class ChannelMatrix(BaseModel):
    """Symmetric matrix of on-probabilities for class pairs"""
    model_config = ConfigDict(frozen=True)

    alpha: Tuple[Tuple[float, ...], ...] = Field(..., min_length=1)

    @field_validator("alpha")
    @classmethod
    def _validate_alpha(cls, alpha):
        return check_alpha_rows(alpha)

    @property
    def r(self) -> int:
        return len(self.alpha)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.alpha, dtype=float)

    def ensure_open_interval(self) -> None:
        for i, row in enumerate(self.alpha, start=1):
            for j, value in enumerate(row, start=1):
                if not 0.0 < value < 1.0:
                    raise ParameterError(f"alpha[{i}][{j}]={value!r} not in the open interval (0, 1)")


class SystemParams(BaseModel):
    """Full parameter tuple for one network instance"""
    model_config = ConfigDict(frozen=True)

    dist: ClassDistribution
    keys: KeyProfile
    channel: ChannelMatrix

    @model_validator(mode="after")
    def _validate_class_count(self):
        if not self.dist.r == self.keys.r == self.channel.r:
            raise ValueError(
                f"class count mismatch: mu has {self.dist.r}, K has {self.keys.r}, alpha has {self.channel.r}"
            )
        return self

    @classmethod
    def build(cls, mu: Sequence[float], K: Sequence[int], P: int, alpha: Sequence[Sequence[float]]) -> "SystemParams":
        return cls(
            dist=ClassDistribution(mu=tuple(mu)),
            keys=KeyProfile(K=tuple(K), P=P),
            channel=ChannelMatrix(alpha=tuple(tuple(row) for row in alpha)),
        )

    @property
    def r(self) -> int:
        return self.dist.r

    def ensure_strict(self) -> None:
        self.keys.ensure_scaling()
        self.channel.ensure_open_interval()

    def with_keys(self, K: Sequence[int]) -> "SystemParams":
        return SystemParams(dist=self.dist, keys=KeyProfile(K=tuple(K), P=self.keys.P), channel=self.channel)

    def with_alpha(self, rows: Sequence[Sequence[float]]) -> "SystemParams":
        return SystemParams(dist=self.dist, keys=self.keys, channel=ChannelMatrix(alpha=tuple(tuple(r) for r in rows)))

    def with_alpha_entry(self, i: int, j: int, value: float) -> "SystemParams":
        """Set alpha_ij and alpha_ji (1-based class indices)."""
        if not (1 <= i <= self.r and 1 <= j <= self.r):
            raise ParameterError(f"class pair ({i}, {j}) out of range 1..{self.r}")
        rows = [list(row) for row in self.channel.alpha]
        rows[i - 1][j - 1] = value
        rows[j - 1][i - 1] = value
        return self.with_alpha(rows)

    def with_alpha_diag(self, value: float) -> "SystemParams":
        rows = [list(row) for row in self.channel.alpha]
        for i in range(self.r):
            rows[i][i] = value
        return self.with_alpha(rows)

    def with_uniform_channel(self, value: float) -> "SystemParams":
        return self.with_alpha([[value] * self.r for _ in range(self.r)])

    def full_visibility(self) -> "SystemParams":
        return self.with_uniform_channel(1.0)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2)
    params: SystemParams
    trials: int = Field(..., ge=1)
    master_seed: int = Field(0, ge=0, lt=MAX_SEED)


class SweepAxis(str, Enum):
    K1 = "K1"
    alpha_entry = "alpha_entry"
    alpha_diag = "alpha_diag"
    channel_scalar = "channel_scalar"


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    axis: SweepAxis
    values: Tuple[float, ...] = Field(..., min_length=1)
    base: ExperimentConfig
    ring_offsets: Optional[Tuple[int, ...]] = None
    entry: Optional[Tuple[int, int]] = None

    @field_validator("values")
    @classmethod
    def _validate_values(cls, values):
        steps = [b - a for a, b in zip(values, values[1:])]
        if steps and not (all(s > 0 for s in steps) or all(s < 0 for s in steps)):
            raise ValueError("sweep values must be strictly monotone")
        return values

    @model_validator(mode="after")
    def _validate_axis(self):
        r = self.base.params.r
        if self.axis == SweepAxis.K1:
            if self.ring_offsets is None:
                raise ValueError("axis K1 requires ring_offsets")
            check_offsets(self.ring_offsets)
            if len(self.ring_offsets) != r:
                raise ValueError(f"ring_offsets must have {r} entries")
            if any(v != int(v) for v in self.values):
                raise ValueError("axis K1 takes integer values")
        if self.axis == SweepAxis.alpha_entry:
            if self.entry is None:
                raise ValueError("axis alpha_entry requires entry=(i, j)")
            i, j = self.entry
            if not (1 <= i <= r and 1 <= j <= r):
                raise ValueError(f"entry ({i}, {j}) out of range 1..{r}")
        for value in self.values:
            try:
                self.params_at(value)
            except ValueError as e:
                raise ValueError(f"sweep value {value!r} is invalid: {e}") from e
        return self

    def params_at(self, value: float) -> SystemParams:
        params = self.base.params
        if self.axis == SweepAxis.K1:
            k1 = int(value)
            return params.with_keys([k1 + offset for offset in self.ring_offsets])
        if self.axis == SweepAxis.alpha_entry:
            return params.with_alpha_entry(self.entry[0], self.entry[1], value)
        if self.axis == SweepAxis.alpha_diag:
            return params.with_alpha_diag(value)
        return params.with_uniform_channel(value)

    def config_at(self, value: float) -> ExperimentConfig:
        return ExperimentConfig(
            n=self.base.n,
            params=self.params_at(value),
            trials=self.base.trials,
            master_seed=self.base.master_seed,
        )


class NetworkConfig(BaseModel):
    """JSON experiment description read by the command line"""

    r: int = Field(..., ge=1)
    mu: List[float]
    P: int = Field(..., ge=1)
    K: Optional[List[int]] = None
    K1: Optional[int] = Field(None, ge=1)
    offsets: Optional[List[int]] = None
    alpha: Union[List[List[float]], List[float]]
    n: int = Field(500, ge=2)
    trials: int = Field(400, ge=1)
    seed: int = Field(0, ge=0, lt=MAX_SEED)

    @field_validator("mu")
    @classmethod
    def _validate_mu(cls, mu, info: ValidationInfo):
        r = info.data.get("r")
        if r is not None and len(mu) != r:
            raise ValueError(f"expected {r} class probabilities, got {len(mu)}")
        return list(check_distribution(mu))

    @field_validator("K")
    @classmethod
    def _validate_K(cls, K, info: ValidationInfo):
        if K is None:
            return K
        r, P = info.data.get("r"), info.data.get("P")
        if r is not None and len(K) != r:
            raise ValueError(f"expected {r} ring sizes, got {len(K)}")
        return list(check_ring_sizes(K, P if P is not None else max(K)))

    @field_validator("offsets")
    @classmethod
    def _validate_offsets(cls, offsets, info: ValidationInfo):
        if offsets is None:
            return offsets
        r = info.data.get("r")
        if r is not None and len(offsets) != r:
            raise ValueError(f"expected {r} offsets, got {len(offsets)}")
        return list(check_offsets(offsets))

    @field_validator("alpha")
    @classmethod
    def _validate_alpha(cls, alpha, info: ValidationInfo):
        r = info.data.get("r")
        if alpha and not isinstance(alpha[0], list):
            if r is None or len(alpha) != r * r:
                raise ValueError(f"row-major alpha needs r*r={r * r if r else '?'} entries, got {len(alpha)}")
            alpha = [alpha[i * r:(i + 1) * r] for i in range(r)]
        if r is not None and len(alpha) != r:
            raise ValueError(f"expected a {r}x{r} channel matrix")
        return [list(row) for row in check_alpha_rows(alpha)]

    @model_validator(mode="after")
    def _validate_ring_form(self):
        if (self.K is None) == (self.K1 is None):
            raise ValueError("give exactly one of K or K1 (+ offsets)")
        if self.K1 is not None:
            if self.offsets is None:
                raise ValueError("K1 requires offsets")
            check_ring_sizes(self.ring_sizes(), self.P)
        return self

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> Tuple["NetworkConfig", bytes]:
        raw = Path(path).read_bytes()
        return cls.model_validate_json(raw), raw

    def ring_offsets(self) -> Tuple[int, ...]:
        if self.offsets is not None:
            return tuple(self.offsets)
        return tuple(k - self.K[0] for k in self.K)

    def ring_sizes(self, k1: Optional[int] = None) -> Tuple[int, ...]:
        if k1 is None and self.K is not None:
            return tuple(self.K)
        base = k1 if k1 is not None else self.K1
        return tuple(base + offset for offset in self.ring_offsets())

    def to_params(self, k1: Optional[int] = None) -> SystemParams:
        return SystemParams.build(self.mu, self.ring_sizes(k1), self.P, self.alpha)

    def to_experiment(self, k1: Optional[int] = None, trials: Optional[int] = None,
                      seed: Optional[int] = None) -> ExperimentConfig:
        return ExperimentConfig(
            n=self.n,
            params=self.to_params(k1),
            trials=trials if trials is not None else self.trials,
            master_seed=seed if seed is not None else self.seed,
        )
