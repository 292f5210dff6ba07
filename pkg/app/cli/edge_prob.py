import json

from app.cli.arguments import load_config
from app.cli.errors import EXIT_OK, translate_errors
from app.services.probability_service import derive_all, expected_isolated, satisfies_threshold, scaling_constant


def register(subparsers) -> None:
    parser = subparsers.add_parser("edge-prob", help="print p_ij, lambda_i, Lambda_i and the extremal classes")
    parser.add_argument("--config", required=True, help="JSON network config")
    parser.add_argument("--k1", type=int, default=None, help="override K_1, keeping the config's ring offsets")
    parser.add_argument("--json", action="store_true", help="print the table as JSON")
    parser.set_defaults(handler=edge_prob)


def _row(values) -> str:
    return "  ".join(f"{float(v):.6f}" for v in values)


@translate_errors
def edge_prob(args) -> int:
    config, _ = load_config(args.config)
    params = config.to_params(args.k1)
    derived = derive_all(params)
    c_n = scaling_constant(config.n, derived.lambda_m)
    at_threshold = satisfies_threshold(config.n, derived.lambda_m)

    if args.json:
        payload = derived.to_dict()
        payload.update({'K': list(params.keys.K), 'P': params.keys.P, 'n': config.n,
                        'c_n': c_n, 'at_threshold': at_threshold,
                        'expected_isolated': expected_isolated(config.n, params, derived)})
        print(json.dumps(payload, indent=2))
        return EXIT_OK

    print(f"r={params.r} n={config.n} P={params.keys.P} K={','.join(str(k) for k in params.keys.K)}")
    print("p_ij:")
    for row in derived.p:
        print(f"  {_row(row)}")
    print(f"lambda_i: {_row(derived.lam)}")
    print(f"Lambda_i: {_row(derived.Lam)}")
    print(f"m={derived.m} d={derived.d} s={derived.s}")
    print(f"alpha_min={derived.alpha_min:.6f} alpha_max={derived.alpha_max:.6f}")
    print(f"lambda_m={derived.lambda_m:.6f} c_n={c_n:.6f} at_threshold={int(at_threshold)}")
    return EXIT_OK
