from app.cli.arguments import load_config, parse_int_list
from app.cli.errors import EXIT_OK, translate_errors
from app.models.params import ChannelMatrix, ClassDistribution
from app.services.probability_service import critical_k1


def register(subparsers) -> None:
    parser = subparsers.add_parser("threshold", help="smallest K_1 with n * Lambda_m > log n")
    parser.add_argument("--config", required=True, help="JSON network config")
    parser.add_argument("--offsets", default=None,
                        help="ring offsets K_j - K_1 as a comma list (default: taken from the config)")
    parser.set_defaults(handler=threshold)


@translate_errors
def threshold(args) -> int:
    config, _ = load_config(args.config)
    offsets = parse_int_list(args.offsets, "offsets") if args.offsets else config.ring_offsets()
    k1 = critical_k1(
        config.n,
        ClassDistribution(mu=tuple(config.mu)),
        ChannelMatrix(alpha=tuple(tuple(row) for row in config.alpha)),
        offsets,
        config.P,
    )
    print(f"K1*={k1}")
    return EXIT_OK
