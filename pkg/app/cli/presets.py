"""
Recipes for the four published connectivity figures. Every figure uses
n = 500, P = 10^4, mu = (0.5, 0.5), K_2 = K_1 + 5 and 400 trials per point;
each curve becomes one CSV.
"""

import json
from dataclasses import dataclass
from typing import Dict, List, Tuple

from app.models.params import ExperimentConfig, SweepAxis, SweepSpec, SystemParams
from app.utils.errors import ParameterError

FIGURE_IDS = (1, 2, 3, 4)
FIGURE_N = 500
FIGURE_POOL = 10_000
FIGURE_TRIALS = 400
FIGURE_MU = (0.5, 0.5)
FIGURE_OFFSETS = (0, 5)

FIGURE1_CROSS = (0.2, 0.4, 0.6)
FIGURE1_DIAGONAL = 0.3
FIGURE1_K1 = tuple(range(5, 26))

FIGURE2_FIRST = (0.2, 0.4, 0.6)
FIGURE2_FIXED = 0.2
FIGURE2_K1 = tuple(range(10, 26))

FIGURE34_K1 = (20, 25, 30, 35)
FIGURE34_FIXED = 0.2
UNIT_GRID = tuple(round(0.05 * i, 2) for i in range(21))


@dataclass(frozen=True)
class FigureCurve:
    """One curve of a figure: where it is written and the sweep that produces it"""
    figure_id: int
    label: str
    filename: str
    spec: SweepSpec
    recipe: Dict

    def raw_recipe(self) -> bytes:
        return json.dumps(self.recipe, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _params(k1: int, alpha: Tuple[Tuple[float, float], Tuple[float, float]]) -> SystemParams:
    return SystemParams.build(FIGURE_MU, (k1 + FIGURE_OFFSETS[0], k1 + FIGURE_OFFSETS[1]), FIGURE_POOL, alpha)


def _curve(figure_id: int, label: str, filename: str, axis: SweepAxis, values, params: SystemParams,
           trials: int, seed: int, **extra) -> FigureCurve:
    base = ExperimentConfig(n=FIGURE_N, params=params, trials=trials, master_seed=seed)
    spec = SweepSpec(axis=axis, values=tuple(values), base=base, **extra)
    recipe = {
        'figure': figure_id,
        'curve': label,
        'axis': axis.value,
        'values': list(spec.values),
        'n': FIGURE_N,
        'mu': list(FIGURE_MU),
        'K': list(params.keys.K),
        'P': FIGURE_POOL,
        'alpha': [list(row) for row in params.channel.alpha],
        'trials': trials,
        'seed': seed,
    }
    if extra.get('ring_offsets') is not None:
        recipe['offsets'] = list(extra['ring_offsets'])
    if extra.get('entry') is not None:
        recipe['entry'] = list(extra['entry'])
    return FigureCurve(figure_id=figure_id, label=label, filename=filename, spec=spec, recipe=recipe)


def figure_curves(figure_id: int, trials: int = FIGURE_TRIALS, seed: int = 0) -> List[FigureCurve]:
    if figure_id == 1:
        # connectivity against K_1 for several cross-class channel probabilities
        return [
            _curve(1, f"alpha12={a12}", f"figure1_alpha12_{a12}.csv", SweepAxis.K1, FIGURE1_K1,
                   _params(FIGURE1_K1[0], ((FIGURE1_DIAGONAL, a12), (a12, FIGURE1_DIAGONAL))),
                   trials, seed, ring_offsets=FIGURE_OFFSETS)
            for a12 in FIGURE1_CROSS
        ]
    if figure_id == 2:
        return [
            _curve(2, f"alpha11={a11}", f"figure2_alpha11_{a11}.csv", SweepAxis.K1, FIGURE2_K1,
                   _params(FIGURE2_K1[0], ((a11, FIGURE2_FIXED), (FIGURE2_FIXED, FIGURE2_FIXED))),
                   trials, seed, ring_offsets=FIGURE_OFFSETS)
            for a11 in FIGURE2_FIRST
        ]
    if figure_id == 3:
        # alpha_11 = alpha_22 swept together; zero diagonal leaves a bipartite channel
        return [
            _curve(3, f"K1={k1}", f"figure3_K1_{k1}.csv", SweepAxis.alpha_diag, UNIT_GRID,
                   _params(k1, ((0.0, FIGURE34_FIXED), (FIGURE34_FIXED, 0.0))), trials, seed)
            for k1 in FIGURE34_K1
        ]
    if figure_id == 4:
        return [
            _curve(4, f"K1={k1}", f"figure4_K1_{k1}.csv", SweepAxis.alpha_entry, UNIT_GRID,
                   _params(k1, ((FIGURE34_FIXED, 0.0), (0.0, FIGURE34_FIXED))), trials, seed, entry=(1, 2))
            for k1 in FIGURE34_K1
        ]
    raise ParameterError(f"unknown figure id {figure_id} (expected one of {FIGURE_IDS})")
