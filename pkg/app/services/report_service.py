"""
CSV and manifest emission. CSV bytes depend only on the result, so identical
(config, seed) runs write identical files; wall time lives in the manifest.
"""

import csv
import hashlib
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Sequence, Union

from app import __version__
from app.models.results import ConditionReport, RunManifest, SweepResult

logger = logging.getLogger(__name__)

SWEEP_HEADER = [
    'sweep_value', 'n', 'trials', 'connected_count', 'isolated_free_count',
    'p_connected', 'p_isolated_free', 'lambda_m', 'c_n', 'at_threshold',
]

CONDITION_HEADER = [
    'n', 'K1', 'Kr', 'P', 'm', 'lambda_m', 'c_n', 'pool_ratio', 'edge_floor',
    'key_spread', 'channel_spread', 'alpha_md_log', 'alpha_mm_log',
]

PathLike = Union[str, Path]


def config_hash(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def manifest_path(csv_path: PathLike) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.name + ".manifest.json")


def format_sweep_value(axis: str, value: float) -> str:
    if axis == "K1":
        return str(int(value))
    return f"{value:.6f}"


class ReportService:
    """Writes result tables and their manifest side files"""

    def __init__(self, command: Optional[Sequence[str]] = None):
        self.command = list(command) if command is not None else list(sys.argv)

    def sweep_rows(self, result: SweepResult) -> List[List[str]]:
        rows = []
        for row in result.rows:
            rows.append([
                format_sweep_value(result.axis, row.value),
                str(row.n),
                str(row.tally.trials),
                str(row.tally.connected_count),
                str(row.tally.isolated_free_count),
                f"{row.tally.p_connected:.6f}",
                f"{row.tally.p_isolated_free:.6f}",
                f"{row.lambda_m:.6f}",
                f"{row.c_n:.6f}",
                "1" if row.at_threshold else "0",
            ])
        return rows

    def condition_rows(self, report: ConditionReport) -> List[List[str]]:
        rows = []
        for point in report.points:
            rows.append([
                str(point.n), str(point.K1), str(point.Kr), str(point.P), str(point.m),
                f"{point.lambda_m:.6e}", f"{point.c_n:.6f}", f"{point.pool_ratio:.6f}",
                f"{point.edge_floor:.6f}", f"{point.key_spread:.6f}", f"{point.channel_spread:.6f}",
                f"{point.alpha_md_log:.6f}", f"{point.alpha_mm_log:.6f}",
            ])
        return rows

    def _write_csv(self, path: PathLike, header: List[str], rows: List[List[str]]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        logger.info(f"wrote {path}")
        return path

    def write_sweep_csv(self, result: SweepResult, path: PathLike) -> Path:
        return self._write_csv(path, SWEEP_HEADER, self.sweep_rows(result))

    def write_condition_csv(self, report: ConditionReport, path: PathLike) -> Path:
        return self._write_csv(path, CONDITION_HEADER, self.condition_rows(report))

    def write_sweep_json(self, result: SweepResult, path: PathLike) -> Path:
        """Full in-memory sweep, including the expected isolated-node counts the CSV omits."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(result.to_dict(), indent=2) + "\n", encoding="utf-8")
        logger.info(f"wrote {path}")
        return path

    def write_manifest(self, csv_path: PathLike, raw_config: bytes, master_seed: int,
                       wall_time_seconds: float) -> Path:
        manifest = RunManifest(
            command=self.command,
            config_hash=config_hash(raw_config),
            master_seed=master_seed,
            tool_version=__version__,
            wall_time_seconds=round(wall_time_seconds, 3),
            outputs=[str(csv_path)],
            created_at=datetime.now(timezone.utc),
        )
        path = manifest_path(csv_path)
        path.write_text(json.dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8")
        return path
