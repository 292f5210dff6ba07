# app/utils/seeding.py
"""
Per-trial seed derivation and random stream splitting.

A trial's seed depends only on (master_seed, trial_index), so trials can run
in any order on any number of workers and still draw identical streams.

derive_trial_seed(s, t) = mix64((s + (t + 1) * GOLDEN_GAMMA) mod 2**64)

mix64 is the splitmix64 finalizer, a bijection on 64-bit integers. Adding an
odd multiple of t keeps the pre-image distinct for every (s, t) pair with
t < 2**64, so derived seeds never collide for a fixed master seed, and two
master seeds never map the same trial index to the same seed.
"""

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    if trial_index < 0:
        raise ValueError("trial index must be non-negative")
    return mix64(master_seed + (trial_index + 1) * GOLDEN_GAMMA)


@dataclass(frozen=True)
class TrialStreams:
    """Independent generators for class labels, key rings and channel coins"""
    classes: np.random.Generator
    rings: np.random.Generator
    channel: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "TrialStreams":
        children = np.random.SeedSequence(seed & MASK64).spawn(3)
        return cls(*(np.random.default_rng(child) for child in children))
