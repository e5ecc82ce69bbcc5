import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from routers.commands import commands_router, run
from schemas.commands import Command
from logging_config import get_logger

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adgame",
        description="Attacker/defender graph games: matchings, partitions and Nash equilibria.",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name, summary in commands_router.help.items():
        sub = subparsers.add_parser(name, help=summary)
        sub.add_argument("graph_path", type=Path, help="edge-list graph document")
        sub.add_argument("--alpha", type=int, help="number of attackers")
        sub.add_argument("--delta", type=int, help="number of defenders")
        sub.add_argument("--profile", dest="profile_path", type=Path, help="profile document")
        sub.add_argument("--matching", dest="matching_path", type=Path, help="fractional matching document")
        sub.add_argument("--bound", type=int, help="override the exact-search vertex bound")
        sub.add_argument("--pure", action="store_true", help="build a pure equilibrium")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cmd = Command(**vars(args))
    except ValidationError as e:
        message = e.errors()[0]["msg"].removeprefix("Value error, ")
        logger.info(f"Rejected command line: {message}")
        print(f"error: {message}", file=sys.stderr)
        return 2

    result = run(cmd)
    if result.report:
        sys.stdout.write(result.report)
    if result.diagnostic:
        print(result.diagnostic, file=sys.stderr)
    return result.exit_status
