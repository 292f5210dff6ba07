import math

import numpy as np

from app.cli.arguments import load_config, parse_pair
from app.cli.errors import EXIT_OK, translate_errors
from app.services.analysis_service import summarize
from app.services.oracle_service import (
    MIN_EDGE_SAMPLES,
    dfs_component_count,
    empirical_edge_freq,
    exhaustive_key_prob_exact,
)
from app.services.probability_service import derive_all, key_share_prob
from app.services.sampler_service import build_intersection
from app.utils.errors import ParameterError
from app.utils.seeding import TrialStreams, derive_trial_seed


def register(subparsers) -> None:
    parser = subparsers.add_parser("oracle")
    modes = parser.add_subparsers(dest="oracle_mode", metavar="{key-prob,components,edge-freq}")
    modes.required = True

    key_prob = modes.add_parser("key-prob", help="closed form against full subset enumeration")
    key_prob.add_argument("--ki", type=int, required=True)
    key_prob.add_argument("--kj", type=int, required=True)
    key_prob.add_argument("--pool", type=int, required=True)
    key_prob.set_defaults(handler=oracle_key_prob)

    components = modes.add_parser("components", help="union-find component count against DFS on sampled graphs")
    components.add_argument("--config", required=True)
    components.add_argument("--trials", type=int, default=10)
    components.add_argument("--seed", type=int, default=None)
    components.set_defaults(handler=oracle_components)

    edge_freq = modes.add_parser("edge-freq", help="sampled class-pair edge frequency against alpha_ij * p_ij")
    edge_freq.add_argument("--config", required=True)
    edge_freq.add_argument("--pair", default="1,2", help="class pair i,j (1-based)")
    edge_freq.add_argument("--samples", type=int, default=100_000)
    edge_freq.add_argument("--seed", type=int, default=None)
    edge_freq.set_defaults(handler=oracle_edge_freq)


@translate_errors
def oracle_key_prob(args) -> int:
    exact = exhaustive_key_prob_exact(args.ki, args.kj, args.pool)
    formula = key_share_prob(args.ki, args.kj, args.pool)
    print(f"exhaustive={exact} ({float(exact):.12f}) formula={formula:.12f} "
          f"diff={abs(formula - float(exact)):.3e}")
    return EXIT_OK


@translate_errors
def oracle_components(args) -> int:
    config, _ = load_config(args.config)
    experiment = config.to_experiment(trials=args.trials, seed=args.seed)
    mismatches = 0
    for trial in range(experiment.trials):
        streams = TrialStreams.from_seed(derive_trial_seed(experiment.master_seed, trial))
        _, graph = build_intersection(experiment.n, experiment.params, streams)
        fast = summarize(graph).component_count
        slow = dfs_component_count(graph)
        mismatches += fast != slow
        print(f"trial {trial}: edges={graph.edge_count} union_find={fast} dfs={slow}")
    print(f"mismatches={mismatches}")
    return EXIT_OK


@translate_errors
def oracle_edge_freq(args) -> int:
    if args.samples < MIN_EDGE_SAMPLES:
        raise ParameterError(f"--samples must be at least {MIN_EDGE_SAMPLES}")
    config, _ = load_config(args.config)
    params = config.to_params()
    i, j = parse_pair(args.pair, "pair")
    seed = config.seed if args.seed is None else args.seed
    observed = empirical_edge_freq(params, i, j, args.samples, np.random.default_rng(seed))
    expected = params.channel.alpha[i - 1][j - 1] * float(derive_all(params).p[i - 1, j - 1])
    sigma = math.sqrt(expected * (1 - expected) / args.samples)
    z = (observed - expected) / sigma if sigma > 0 else 0.0
    print(f"observed={observed:.6f} expected={expected:.6f} sigma={sigma:.6f} z={z:+.2f}")
    return EXIT_OK
