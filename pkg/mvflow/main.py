#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Main Entry Point

This is the command-line entry point. It loads the environment, sets up
logging and the exception handler, and dispatches to the run, verify,
sweep and plot subcommands. The process exit code is the only contract:
diagnostics go to the error stream and data to files.
"""

import argparse
import os
import sys
from pathlib import Path

from dotenv import load_dotenv

import mvflow
from mvflow.commands import cmd_plot, cmd_run, cmd_sweep, cmd_verify
from mvflow.utils.logger import LOG_LEVELS, level_from_env, set_log_level, setup_logger
from mvflow.utils.error_handler import setup_exception_handler


def load_environment():
    """
    Load environment variables from the first .env file found.

    Returns:
        Path: The loaded file, or None when the defaults are used
    """
    env_paths = [
        Path(__file__).parent / ".env",           # mvflow/.env
        Path(__file__).parent.parent / ".env",    # project root .env
    ]
    for env_path in env_paths:
        if env_path.exists():
            load_dotenv(dotenv_path=env_path)
            return env_path
    load_dotenv()
    return None


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser that exits with the input-error code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    """
    Build the argument parser.

    Returns:
        argparse.ArgumentParser: Parser with one subparser per command
    """
    parser = ArgumentParser(
        prog='mvflow',
        description="Mixed-volume-preserving curvature flows of convex hypersurfaces")
    parser.add_argument('--version', action='version', version=f"%(prog)s {mvflow.__version__}")
    parser.add_argument('--log-level', choices=sorted(LOG_LEVELS), default=None,
                        help="override MVFLOW_LOG for this invocation")
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help="run one configured flow")
    run.add_argument('--config', required=True, help="JSON run configuration")
    run.add_argument('--out', required=True, help="run directory")

    verify = commands.add_parser('verify', help="certify the curvature function registry")
    verify.add_argument('--n', type=int, default=3, help="dimension (default: 3)")
    verify.add_argument('--samples', type=int, default=100000, help="samples per check")
    verify.add_argument('--seed', type=int, default=0, help="sampler seed")
    verify.add_argument('--out', default='.', help="directory of verify_report.json")

    sweep = commands.add_parser('sweep', help="run the cartesian product of a sweep file")
    sweep.add_argument('--config', required=True, help="JSON sweep file")
    sweep.add_argument('--out', required=True, help="sweep directory")
    sweep.add_argument('--workers', type=int, default=None,
                       help="parallel runs (default: sweep file, then MVFLOW_WORKERS, then 1)")

    plot = commands.add_parser('plot', help="chart a trajectory as SVG files")
    plot.add_argument('trajectory', help="trajectory CSV")
    plot.add_argument('--out', required=True, help="chart directory")
    return parser


def dispatch(args):
    """Run the selected command and return its exit code."""
    if args.command == 'run':
        return cmd_run(args.config, args.out)
    if args.command == 'verify':
        return cmd_verify(args.n, args.samples, args.seed, args.out)
    if args.command == 'sweep':
        return cmd_sweep(args.config, args.out, args.workers)
    return cmd_plot(args.trajectory, args.out)


def main(argv=None):
    """
    Main entry point.

    Args:
        argv (list, optional): Arguments, sys.argv[1:] when omitted

    Returns:
        int: Process exit code
    """
    args = build_parser().parse_args(argv)

    env_path = load_environment()
    debug_mode = os.getenv('MVFLOW_DEBUG', 'False').lower() == 'true'
    logger = setup_logger(level=level_from_env(), log_file=os.getenv('MVFLOW_LOG_FILE') or None)
    setup_exception_handler(debug_mode)
    if args.log_level:
        set_log_level(LOG_LEVELS[args.log_level])
    if env_path:
        logger.debug(f"Loaded environment from: {env_path}")
    logger.debug(f"MVFlow {mvflow.__version__}: {args.command}")

    return dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
