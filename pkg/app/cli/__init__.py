"""
Command line front-end. Each subcommand lives in its own module and registers
itself on the shared parser; handlers return an exit code and report failures
as CommandError.
"""

import argparse
import sys
from typing import Optional, Sequence

from app import __version__
from app.cli import edge_prob, figure, oracle, scaling, sweep, threshold
from app.cli.errors import EXIT_VALIDATION, CommandError

PUBLIC_COMMANDS = "{edge-prob,threshold,sweep,figure,check-scaling}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keygraph",
        description="Connectivity of key graphs intersected with heterogeneous on-off channels",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar=PUBLIC_COMMANDS)
    for module in (edge_prob, threshold, sweep, figure, scaling, oracle):
        module.register(subparsers)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "handler", None) is None:
        parser.print_help(sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.handler(args)
    except CommandError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
