import json
import math
import time
from typing import Callable, Optional

from app.cli.arguments import load_config, parse_float_list, parse_int_list
from app.cli.errors import EXIT_OK, translate_errors
from app.models.params import ClassDistribution
from app.services.report_service import ReportService
from app.services.scaling_service import (
    DEFAULT_TAU,
    ScalingFamily,
    constant_family,
    evaluate_conditions,
    fixed_keys_family,
    two_class_example_family,
)
from app.utils.errors import ParameterError

DEFAULT_GRID = "1000,10000,100000,1000000"
ALPHA_MIN_KINDS = ("log-power", "constant", "inverse-n")


def register(subparsers) -> None:
    parser = subparsers.add_parser("check-scaling", help="finite-n diagnostics of a scaling family over a grid of n")
    parser.add_argument("--family", choices=("example", "fixed"), default="example",
                        help="example: two-class family built from epsilon; fixed: K and P from --config")
    parser.add_argument("--epsilon", type=float, default=0.25)
    parser.add_argument("--mu", default="0.5,0.5", help="class probabilities for the example family")
    parser.add_argument("--alpha-min-kind", choices=ALPHA_MIN_KINDS, default=None,
                        help="log-power: (log n)^-c; constant: c; inverse-n: c/n")
    parser.add_argument("--alpha-min-param", type=float, default=None, help="the constant c of --alpha-min-kind")
    parser.add_argument("--config", default=None, help="JSON network config for the fixed family")
    parser.add_argument("--grid", default=DEFAULT_GRID, help="comma separated values of n")
    parser.add_argument("--tau", type=float, default=DEFAULT_TAU)
    parser.add_argument("--out", default=None, help="optional CSV path for the per-n report")
    parser.set_defaults(handler=check_scaling)


def alpha_min_rule(kind: str, param: Optional[float]) -> Callable[[int], float]:
    if kind == "log-power":
        power = 2.0 if param is None else param
        return lambda n: math.log(n) ** -power
    if kind == "constant":
        if param is None:
            raise ParameterError("--alpha-min-kind constant needs --alpha-min-param")
        return lambda n: param
    if kind == "inverse-n":
        scale = 1.0 if param is None else param
        return lambda n: scale / n
    raise ParameterError(f"unknown alpha_min kind {kind!r}")


def build_family(args) -> ScalingFamily:
    if args.family == "example":
        mu = ClassDistribution(mu=tuple(parse_float_list(args.mu, "mu")))
        rule = alpha_min_rule(args.alpha_min_kind or "log-power", args.alpha_min_param)
        return two_class_example_family(args.epsilon, mu, rule)

    if args.config is None:
        raise ParameterError("the fixed family needs --config")
    config, _ = load_config(args.config)
    params = config.to_params()
    if args.alpha_min_kind is None:
        return constant_family(params)
    base = params.channel.alpha
    base_min = min(min(row) for row in base)
    if base_min <= 0:
        raise ParameterError("scaling the channel matrix needs every alpha entry to be positive")
    rule = alpha_min_rule(args.alpha_min_kind, args.alpha_min_param)

    # shape of the config's matrix kept, minimum entry pinned to the rule
    def alpha_rule(n: int):
        factor = rule(n) / base_min
        return [[a * factor for a in row] for row in base]

    return fixed_keys_family(params.dist, params.keys.K, params.keys.P, alpha_rule,
                             name=f"fixed-keys/{args.alpha_min_kind}")


def _recipe(args) -> bytes:
    recipe = {key: value for key, value in sorted(vars(args).items()) if key != "handler"}
    return json.dumps(recipe, sort_keys=True, separators=(",", ":")).encode("utf-8")


@translate_errors
def check_scaling(args) -> int:
    started = time.perf_counter()
    family = build_family(args)
    report = evaluate_conditions(family, parse_int_list(args.grid, "grid"), tau=args.tau)

    print(f"family={report.family} tau={report.tau:g}")
    for name, value in family.parameters.items():
        print(f"  {name}={value:g}")
    print(f"{'n':>10} {'K1':>6} {'Kr':>6} {'m':>2} {'c_n':>10} {'edge_floor':>11} {'pool_ratio':>11}")
    for point in report.points:
        print(f"{point.n:>10} {point.K1:>6} {point.Kr:>6} {point.m:>2} {point.c_n:>10.4f} "
              f"{point.edge_floor:>11.4f} {point.pool_ratio:>11.4f}")
    for name, trend in report.trends.items():
        print(f"trend {name}: min={trend.minimum:.6g} max={trend.maximum:.6g} {trend.direction}")
    print(f"rho_hat={report.rho_hat:.6g} sigma_hat={report.sigma_hat:.6g}")

    if args.out:
        reports = ReportService()
        path = reports.write_condition_csv(report, args.out)
        reports.write_manifest(path, _recipe(args), 0, time.perf_counter() - started)
        print(f"wrote {path}")
    return EXIT_OK
