"""
stvaudit - single entry point.

    python -m stvaudit.main tabulate FILE_OR_DIR ... [--seats N] [--format table|csv|json] [--out DIR]
    python -m stvaudit.main anomalies FILE_OR_DIR ... [--kinds committee,upward,downward,noshow]
    python -m stvaudit.main closeness FILE_OR_DIR ...
    python -m stvaudit.main stats FILE_OR_DIR ...
    python -m stvaudit.main verify CERT.json ... --election FILE.blt
"""

import argparse
import logging
import os
import sys

from stvaudit import config
from stvaudit.commands import COMMANDS, FORMATS, RunConfig
from stvaudit.core import database
from stvaudit.core.migrations import run_migrations
from stvaudit.corpus.runner import EXIT_FAILURE, EXIT_INPUT, SEARCHERS
from stvaudit.engine.tabulate import TiePolicy

logger = logging.getLogger(__name__)


def setup_logging():
    """File log under LOGS_DIR plus stderr; stdout is kept for command output."""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    try:
        os.makedirs(config.LOGS_DIR, exist_ok=True)
        handlers.append(logging.FileHandler(os.path.join(config.LOGS_DIR, 'stvaudit.log'), encoding='utf-8'))
    except OSError as e:
        sys.stderr.write(f"log file disabled: {e}\n")

    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
    )
    # Suppress noisy loggers
    logging.getLogger('asyncio').setLevel(logging.WARNING)


def _kinds(text: str) -> tuple[str, ...]:
    kinds = tuple(k.strip() for k in text.split(',') if k.strip())
    unknown = [k for k in kinds if k not in SEARCHERS]
    if unknown or not kinds:
        raise argparse.ArgumentTypeError(f"choose from {','.join(SEARCHERS)}")
    # report order, not the order given
    return tuple(k for k in SEARCHERS if k in kinds)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='stvaudit',
        description="Scottish STV tabulation, monotonicity anomaly search and closeness analysis.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('command', choices=list(COMMANDS))
    parser.add_argument('inputs', nargs='+', help='BLT files or directories (certificate files for verify)')
    parser.add_argument('--seats', type=_positive, help='override the seat count in the file header')
    parser.add_argument('--kinds', type=_kinds, default=tuple(SEARCHERS),
                        help='comma-separated: committee,upward,downward,noshow')
    parser.add_argument('--budget-probes', type=_positive, default=config.BUDGET_PROBES,
                        help='probe tabulations allowed per election')
    parser.add_argument('--budget-seconds', type=float, default=config.BUDGET_SECONDS,
                        help='wall-time cap per election, 0 for none')
    parser.add_argument('--tie-policy', choices=[p.value for p in TiePolicy], default=config.TIE_POLICY)
    parser.add_argument('--format', dest='fmt', choices=FORMATS, default='table')
    parser.add_argument('--out', help='write result files under this directory')
    parser.add_argument('--election', help='ballot file the certificates refer to (verify)')
    parser.add_argument('--workers', type=_positive, default=config.WORKERS)
    parser.add_argument('--no-run-log', action='store_true', help='do not record this run in the run log')
    return parser


def _start_run_log(cfg: RunConfig):
    try:
        run_migrations()
        cfg.run_id = database.start_run(cfg.command, cfg.inputs)
    except Exception as e:
        logger.error("Run log unavailable: %s", e)
        cfg.run_id = None


def _finish_run_log(cfg: RunConfig, code: int):
    if cfg.run_id is None:
        return
    try:
        database.finish_run(cfg.run_id, code)
    except Exception as e:
        logger.error("Run log finish failed: %s", e)
    finally:
        database.close()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging()

    try:
        cfg = RunConfig(
            command=args.command,
            inputs=args.inputs,
            seats=args.seats,
            kinds=args.kinds,
            budget_probes=args.budget_probes,
            budget_seconds=args.budget_seconds,
            tie_policy=TiePolicy(args.tie_policy),
            fmt=args.fmt,
            out=args.out,
            run_log=not args.no_run_log,
            election=args.election,
            workers=args.workers,
        )
    except ValueError as e:
        sys.stderr.write(f"stvaudit: {e}\n")
        return EXIT_INPUT

    if cfg.run_log:
        _start_run_log(cfg)
    logger.info("Starting %s on %d input(s)", cfg.command, len(cfg.inputs))

    try:
        code = COMMANDS[cfg.command](cfg)
    except Exception:
        logger.exception("%s failed", cfg.command)
        code = EXIT_FAILURE

    logger.info("Finished %s with exit code %d", cfg.command, code)
    _finish_run_log(cfg, code)
    return code


if __name__ == '__main__':
    sys.exit(main())
