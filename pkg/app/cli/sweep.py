import time

from app.cli.arguments import load_config, parse_int_list, parse_pair, parse_values
from app.cli.errors import EXIT_OK, translate_errors
from app.models.params import SweepAxis, SweepSpec
from app.services.montecarlo_service import MonteCarloService
from app.services.report_service import ReportService


def register(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="Monte Carlo sweep of one parameter, written as CSV")
    parser.add_argument("--config", required=True, help="JSON network config")
    parser.add_argument("--axis", required=True, choices=[axis.value for axis in SweepAxis])
    parser.add_argument("--values", required=True, help='"start:stop:step" (stop included) or "v1,v2,..."')
    parser.add_argument("--entry", default=None, help="class pair i,j for axis alpha_entry (1-based)")
    parser.add_argument("--offsets", default=None, help="ring offsets for axis K1 (default: from the config)")
    parser.add_argument("--out", required=True, help="CSV path; the manifest is written next to it")
    parser.add_argument("--json-out", default=None, help="also write the full result as JSON")
    parser.add_argument("--workers", type=int, default=None, help="worker processes (default: $KEYGRAPH_WORKERS or 1)")
    parser.add_argument("--seed", type=int, default=None, help="master seed (default: the config's seed)")
    parser.add_argument("--trials", type=int, default=None, help="trials per sweep value (default: the config's)")
    parser.set_defaults(handler=sweep)


@translate_errors
def sweep(args) -> int:
    started = time.perf_counter()
    config, raw = load_config(args.config)
    axis = SweepAxis(args.axis)
    offsets = None
    if axis == SweepAxis.K1:
        offsets = tuple(parse_int_list(args.offsets, "offsets")) if args.offsets else config.ring_offsets()
    base = config.to_experiment(trials=args.trials, seed=args.seed)
    spec = SweepSpec(
        axis=axis,
        values=tuple(parse_values(args.values)),
        base=base,
        ring_offsets=offsets,
        entry=parse_pair(args.entry, "entry"),
    )

    result = MonteCarloService(workers=args.workers).run_sweep(spec, label=args.axis)
    reports = ReportService()
    path = reports.write_sweep_csv(result, args.out)
    reports.write_manifest(path, raw, base.master_seed, time.perf_counter() - started)
    if args.json_out:
        reports.write_sweep_json(result, args.json_out)
    print(f"wrote {path} ({len(result.rows)} rows)")
    return EXIT_OK
