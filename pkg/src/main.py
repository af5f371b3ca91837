import argparse
import logging
import sys
from typing import Any, Sequence

from . import config
from .hgspec.session import HGSession, set_default_session
from .hgspec.run_reader import RunReader
from .hgspec.context import AppContext
from .hgspec.controller import RunController
from .hgspec.commands import COMMANDS
from .hgspec.config_builder import build_run_config
from .hgspec.errors import HypergroupError


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logger = setup_logging(verbose_console=args.verbose)

    session = HGSession(logger, mode=args.log_mode)
    set_default_session(session)
    reader = RunReader(logger, session=session)

    ctx = AppContext(
        logger=logger,
        session=session,
        reader=reader,
    )

    controller = RunController(ctx)

    if args.command == "batch":
        return controller.run_batch(args.path)

    try:
        cfg = build_run_config(args.command, _raw_args(args))
    except HypergroupError as e:
        # bad flag values are reported like any other domain error
        return controller.run_command_error(args.command, e)
    return controller.run_command(args.command, cfg)


# Keys argparse adds that are not command arguments.
_NON_ARGS = {"command", "verbose", "log_mode", "path"}


def _raw_args(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in vars(args).items() if k not in _NON_ARGS and v is not None}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["csv", "json", "svg"], default=None, help="output format (default depends on command)")
    p.add_argument("--out", default=None, help="output file; '-' or omitted means stdout")
    p.add_argument("--log-mode", dest="log_mode", choices=["live", "debug", "trace"], default=None)
    p.add_argument("--verbose", action="store_true", help="mirror debug logging to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hgspec",
        description="One-parameter polynomial hypergroup: exact algebra, spectral measures and free-group oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=COMMANDS[name].description)
        _add_common(p)
        return p

    p = add("product")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-r", default=None, help='hypergroup parameter, e.g. "1/4"')
    p.add_argument("--check", action="store_true", default=None, help="cross-verify against closed form and free group")

    p = add("table")
    p.add_argument("-r", default=None)
    p.add_argument("-N", "--max-degree", dest="max_degree", type=int, default=None)

    p = add("classify")
    p.add_argument("--lambda", dest="lam", required=True, help='e.g. "3/2", "sqrt(3)", "1.0+1.0i"')
    p.add_argument("-r", default=None)

    p = add("measure")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("-r", default=None)
    p.add_argument("--grid", type=int, default=None)

    p = add("invert")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--functional", "--phi", dest="functional", default=None, help='"delta0", "geometric:<lambda>", "point:<c>"')
    g.add_argument("--lambda", dest="lam", default=None)
    p.add_argument("-r", default=None)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--end-band", dest="end_band", type=float, default=None)
    p.add_argument("--eps-base", dest="eps_base", type=float, default=None)
    p.add_argument("--eps-steps", dest="eps_steps", type=int, default=None)
    p.add_argument("--levels", type=int, default=None, help="Richardson levels")
    p.add_argument("--strict", action="store_true", default=None)
    p.add_argument("--compare", action="store_true", default=None, help="add converged and closed-form columns to the CSV")

    p = add("moments")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--functional", "--phi", dest="functional", default=None)
    g.add_argument("--lambda", dest="lam", default=None)
    p.add_argument("-r", default=None)
    p.add_argument("-N", "--max-n", dest="max_n", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)

    p = add("plot")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--functional", "--phi", dest="functional", default=None, help='"plancherel", "geometric:<lambda>", ...')
    g.add_argument("--lambda", dest="lam", default=None)
    p.add_argument("-r", default=None)
    p.add_argument("--grid", type=int, default=None)

    p = add("oracle")
    p.add_argument("--l", "-l", dest="l", type=int, default=None, help="free group rank (>= 2)")
    p.add_argument("--maxlen", type=int, default=None, help="largest m + n compared")

    p = add("gram")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--l", "-l", dest="l", type=int, default=None)
    p.add_argument("-N", "--radius", dest="radius", type=int, default=None)
    p.add_argument("--twist", action="store_true", default=None, help="also check the sign-twisted function")

    p = sub.add_parser("batch", help="execute a YAML/JSON run file or a folder of them")
    p.add_argument("path")
    p.add_argument("--log-mode", dest="log_mode", choices=["live", "debug", "trace"], default=None)
    p.add_argument("--verbose", action="store_true")

    return parser


def setup_logging(verbose_console: bool = False):
    logger = logging.getLogger("hgspec")
    logger.setLevel(logging.DEBUG)  # emit everything; handlers will filter

    # Clear existing handlers if this is called multiple times
    for h in list(logger.handlers):
        h.close()
    logger.handlers.clear()
    logger.propagate = False  # don't double-log via root

    fmt = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
    formatter = logging.Formatter(fmt)

    # --- Console (stderr): WARNING (or DEBUG if verbose_console=True) ---
    console_handler = logging.StreamHandler(sys.stderr)
    console_level = logging.DEBUG if verbose_console else logging.WARNING
    console_handler.setLevel(console_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # --- File: DEBUG, truncated each run; HG_LOG_FILE="" disables it ---
    if config.LOG_FILE:
        file_handler = logging.FileHandler(config.LOG_FILE, mode="w", encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        file_handler.name = "default_file"
        logger.addHandler(file_handler)

    return logger


if __name__ == "__main__":
    sys.exit(main())
