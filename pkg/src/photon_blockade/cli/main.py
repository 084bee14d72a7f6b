"""Command-line entry point: ``photon-blockade <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import warnings

from .. import __version__
from ..analytics import WeakDriveWarning
from ..hilbert import DEFAULT_TOLERANCES
from ..kernels import active_backend
from .config import Config, ConfigError
from .runners import COMMANDS, Table

WORKERS_ENV = "PHOTON_BLOCKADE_WORKERS"

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3


def format_float(x: float) -> str:
    return "%.16e" % x


def render(command: str, cfg: Config, table: Table) -> str:
    buf = io.StringIO()
    buf.write(f"# photon-blockade {__version__}\n")
    buf.write(f"# command = {command}\n")
    buf.write(f"# kernel_backend = {active_backend()}\n")
    for name in ("hermitian", "trace", "min_eigenvalue", "hamiltonian_hermitian"):
        buf.write(f"# tolerances.{name} = {getattr(DEFAULT_TOLERANCES, name)!r}\n")
    for key in sorted(cfg.resolved):
        buf.write(f"# {key} = {cfg.resolved[key]}\n")
    for key, value in table.notes:
        buf.write(f"# {key} = {value}\n")
    buf.write(f"# rows = {len(table.rows)}; failed = {table.failures}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns + ["status"])
    for values, status in table.rows:
        writer.writerow([format_float(v) for v in values] + [status])
    return buf.getvalue()


def resolve_workers(flag: int | None) -> int:
    if flag is not None:
        n = flag
    else:
        raw = os.environ.get(WORKERS_ENV, "1")
        try:
            n = int(raw)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"worker count must be >= 1, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photon-blockade", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("--out", help="CSV destination (default: stdout)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a key")
        p.add_argument("--workers", type=int, default=None, help=f"parallel grid workers (default ${WORKERS_ENV} or 1)")
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = ""
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = Config.parse(text, args.config or "<config>")
        for i, assignment in enumerate(args.set, 1):
            cfg.override(assignment, i)
        workers = resolve_workers(args.workers)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WeakDriveWarning)
            table = COMMANDS[args.command](cfg, workers)
        cfg.check_all_used()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = render(args.command, cfg, table)
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if table.failures:
        print(f"{table.failures} of {len(table.rows)} rows failed", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
