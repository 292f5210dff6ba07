"""
Monte Carlo estimation of P[connected] and P[no isolated nodes] for the
composite graph. Trials are the unit of parallel work; each trial derives its
own seed from (master_seed, trial_index), so the worker count never changes
the result.
"""

import logging
import os
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from app.models.params import ExperimentConfig, SweepSpec, SystemParams
from app.models.results import ComponentSummary, DerivedProbabilities, SweepResult, SweepRow, TrialTally
from app.services.analysis_service import summarize
from app.services.probability_service import derive_all, expected_isolated, satisfies_threshold, scaling_constant
from app.services.sampler_service import build_intersection
from app.utils.errors import ParameterError
from app.utils.seeding import TrialStreams, derive_trial_seed

logger = logging.getLogger(__name__)

BLOCKS_PER_WORKER = 4


def run_single_trial(config: ExperimentConfig, trial_index: int) -> ComponentSummary:
    streams = TrialStreams.from_seed(derive_trial_seed(config.master_seed, trial_index))
    _, graph = build_intersection(config.n, config.params, streams)
    summary = summarize(graph)
    if summary.connected and not summary.isolated_free:
        raise RuntimeError(
            f"trial {trial_index}: connected graph on n={config.n} reports "
            f"{summary.isolated_count} isolated nodes"
        )
    return summary


def run_trial_block(config: ExperimentConfig, start: int, stop: int) -> TrialTally:
    connected = isolated_free = 0
    for trial_index in range(start, stop):
        summary = run_single_trial(config, trial_index)
        connected += summary.connected
        isolated_free += summary.isolated_free
    return TrialTally(trials=stop - start, connected_count=connected, isolated_free_count=isolated_free)


def trial_blocks(trials: int, workers: int) -> List[Tuple[int, int]]:
    count = max(1, min(trials, workers * BLOCKS_PER_WORKER))
    bounds = [trials * b // count for b in range(count + 1)]
    return [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]


@dataclass(frozen=True)
class SweepPoint:
    value: float
    params: SystemParams
    derived: DerivedProbabilities
    c_n: float
    at_threshold: bool
    expected_isolated: float


def annotate_sweep(spec: SweepSpec) -> List[SweepPoint]:
    """Closed-form annotations for every sweep value, without sampling."""
    n = spec.base.n
    points = []
    for value in spec.values:
        params = spec.params_at(value)
        derived = derive_all(params)
        points.append(SweepPoint(
            value=value,
            params=params,
            derived=derived,
            c_n=scaling_constant(n, derived.lambda_m),
            at_threshold=satisfies_threshold(n, derived.lambda_m),
            expected_isolated=expected_isolated(n, params, derived),
        ))
    return points


class MonteCarloService:
    """Runs seeded trials inline (workers=1) or across a process pool"""

    def __init__(self, workers: Optional[int] = None):
        if workers is None:
            workers = int(os.getenv("KEYGRAPH_WORKERS", "1"))
        if workers < 1:
            raise ParameterError(f"worker count must be >= 1 (got {workers})")
        self.workers = workers

    @contextmanager
    def _executor(self) -> Iterator[Optional[Executor]]:
        if self.workers == 1:
            yield None
            return
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            yield pool

    def _run(self, config: ExperimentConfig, executor: Optional[Executor]) -> TrialTally:
        blocks = trial_blocks(config.trials, self.workers)
        if executor is None:
            return TrialTally.merge(run_trial_block(config, lo, hi) for lo, hi in blocks)
        futures = [executor.submit(run_trial_block, config, lo, hi) for lo, hi in blocks]
        return TrialTally.merge(future.result() for future in futures)

    def run_trials(self, config: ExperimentConfig) -> TrialTally:
        with self._executor() as executor:
            return self._run(config, executor)

    def run_sweep(self, spec: SweepSpec, label: str = "") -> SweepResult:
        rows = []
        with self._executor() as executor:
            for point in annotate_sweep(spec):
                config = ExperimentConfig(
                    n=spec.base.n,
                    params=point.params,
                    trials=spec.base.trials,
                    master_seed=spec.base.master_seed,
                )
                try:
                    tally = self._run(config, executor)
                except Exception as e:
                    logger.error(f"Error running trials at {spec.axis.value}={point.value}: {str(e)}")
                    raise
                rows.append(SweepRow(
                    value=point.value,
                    n=spec.base.n,
                    tally=tally,
                    lambda_m=point.derived.lambda_m,
                    c_n=point.c_n,
                    at_threshold=point.at_threshold,
                    expected_isolated=point.expected_isolated,
                ))
                logger.info(
                    f"{label or spec.axis.value} {spec.axis.value}={point.value:g}: "
                    f"P[connected]={tally.p_connected:.3f} P[no isolated]={tally.p_isolated_free:.3f} "
                    f"c_n={point.c_n:.3f}"
                )
        return SweepResult(axis=spec.axis.value, rows=tuple(rows), label=label)
