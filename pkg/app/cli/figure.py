import os
import time
from pathlib import Path

from app.cli.errors import EXIT_OK, translate_errors
from app.cli.presets import FIGURE_IDS, FIGURE_TRIALS, figure_curves
from app.services.montecarlo_service import MonteCarloService
from app.services.report_service import ReportService


def register(subparsers) -> None:
    parser = subparsers.add_parser("figure", help="reproduce one of the four connectivity figures as CSVs")
    parser.add_argument("--id", dest="figure_id", type=int, required=True, choices=FIGURE_IDS)
    parser.add_argument("--out-dir", default=None, help="output directory (default: $KEYGRAPH_OUTPUT_DIR or results)")
    parser.add_argument("--seed", type=int, default=0, help="master seed shared by every curve")
    parser.add_argument("--workers", type=int, default=None, help="worker processes (default: $KEYGRAPH_WORKERS or 1)")
    parser.add_argument("--trials", type=int, default=FIGURE_TRIALS, help="trials per point")
    parser.set_defaults(handler=figure)


@translate_errors
def figure(args) -> int:
    out_dir = Path(args.out_dir or os.getenv("KEYGRAPH_OUTPUT_DIR", "results"))
    curves = figure_curves(args.figure_id, trials=args.trials, seed=args.seed)
    service = MonteCarloService(workers=args.workers)
    reports = ReportService()

    for curve in curves:
        started = time.perf_counter()
        result = service.run_sweep(curve.spec, label=f"figure {curve.figure_id} {curve.label}")
        path = reports.write_sweep_csv(result, out_dir / curve.filename)
        reports.write_manifest(path, curve.raw_recipe(), args.seed, time.perf_counter() - started)
        threshold = result.first_threshold_value()
        marker = f" first at_threshold={threshold:g}" if threshold is not None else ""
        print(f"wrote {path} ({len(result.rows)} rows){marker}")
    return EXIT_OK
