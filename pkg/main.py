import argparse
import logging
import sys
from typing import List, Optional

from pwgraph.commands import COMMANDS
from pwgraph.config import load_config
from pwgraph.services.error_handler import ExitCode, PWGraphError, exit_code_for

logger = logging.getLogger("pwgraph")


def setup_logging(level: str = "WARNING", log_file: Optional[str] = None) -> logging.Logger:
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )
    return logger


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwgraph",
        description="Paley-Wiener spaces, uniqueness sets and sampling on finite graphs",
    )
    parser.add_argument("--config", help="JSON file overriding the run configuration (or set $PWGRAPH_CONFIG)")
    parser.add_argument("--log-level", help="override the configured log level")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS.values():
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        cfg = load_config(args.config)
    except PWGraphError as e:
        sys.stderr.write(f"pwgraph: {e}\n")
        return int(e.exit_code)

    setup_logging(args.log_level or cfg.observability.log_level, cfg.observability.log_file)
    logger.info(f"Running '{args.command}'")

    try:
        return COMMANDS[args.command].run(args, cfg)
    except PWGraphError as e:
        sys.stderr.write(f"pwgraph: {type(e).__name__}: {e}\n")
        return int(exit_code_for(e))
    except Exception as e:
        sys.stderr.write(f"pwgraph: unexpected failure: {e}\n")
        return int(ExitCode.FAILURE)


if __name__ == "__main__":
    sys.exit(main())
