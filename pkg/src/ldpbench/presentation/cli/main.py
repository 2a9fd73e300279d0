"""``ldp-bench`` command line: generate, run, report and validate."""

from __future__ import annotations

import argparse
import asyncio
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, TextIO

import pandas as pd

from ldpbench import __version__
from ldpbench.app import (
    create_report_use_case,
    create_run_experiment_use_case,
    create_validation_service,
)
from ldpbench.application.use_cases.build_report_use_case import ReportFilter
from ldpbench.domain.exceptions import DomainError
from ldpbench.domain.value_objects.generator_config import (
    DEFAULT_DOMAIN_SIZE,
    DEFAULT_GAUSSIAN_MEAN,
    DEFAULT_GAUSSIAN_SD,
    DEFAULT_POPULATION_SIZE,
    DEFAULT_ZIPF_EXPONENT,
    GeneratorConfig,
    GeneratorKind,
)
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind
from ldpbench.domain.value_objects.win_table_entry import UtilitySummary, WinTableEntry
from ldpbench.infrastructure.config.experiment_config import load_experiment_config
from ldpbench.infrastructure.config.settings import BenchmarkSettings
from ldpbench.infrastructure.datasets.population_file import PopulationFileRepository
from ldpbench.infrastructure.datasets.synthetic_generator import (
    SyntheticPopulationGenerator,
)
from shared.infrastructure.logging import log_event, setup_logging
from shared.infrastructure.telemetry import (
    TelemetryConfig,
    create_metrics_recorder,
    create_tracing_provider,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

WIN_TABLE_COLUMNS = [
    "dataset",
    "protocol",
    "epsilon",
    "metric",
    "best_pp",
    "win_fraction",
    "wins",
]
SUMMARY_COLUMNS = [
    "dataset",
    "protocol",
    "epsilon",
    "metric",
    "pp",
    "mean",
    "std",
    "ratio_to_no_pp",
]


def _parsed_by(parse: Callable[[str], Any]) -> Callable[[str], Any]:
    """Adapt a ``from_string`` parser to argparse's error reporting."""

    def convert(value: str) -> Any:
        try:
            return parse(value)
        except DomainError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return convert


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {number}")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldp-bench",
        description="Benchmark post-processing of LDP frequency estimates.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser(
        "generate", help="write a synthetic population file"
    )
    generate.add_argument(
        "--kind", required=True, type=_parsed_by(GeneratorKind.from_string)
    )
    generate.add_argument("--n", type=_positive_int, default=DEFAULT_POPULATION_SIZE)
    generate.add_argument("--d", type=int, default=DEFAULT_DOMAIN_SIZE)
    generate.add_argument("--mu", type=float, default=DEFAULT_GAUSSIAN_MEAN)
    generate.add_argument("--sd", type=float, default=DEFAULT_GAUSSIAN_SD)
    generate.add_argument("--s", type=float, default=DEFAULT_ZIPF_EXPONENT)
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--name", help="population name (default: from params)")
    generate.add_argument("--out", required=True, type=Path)

    run = commands.add_parser("run", help="run an experiment config")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument(
        "--out", type=Path, help="output directory (default: config output_dir)"
    )
    run.add_argument("--max-concurrent-tasks", type=_positive_int)

    report = commands.add_parser("report", help="best-PP tables of a results file")
    report.add_argument("--in", dest="input", required=True, type=Path)
    report.add_argument("--metric", type=_parsed_by(MetricKind.from_string))
    report.add_argument("--dataset")
    report.add_argument("--protocol", type=_parsed_by(ProtocolKind.from_string))
    report.add_argument("--epsilon", type=float)
    report.add_argument(
        "--by-mean",
        action="store_true",
        help="name the method with the lowest mean instead of the most run wins",
    )
    report.add_argument(
        "--include-no-pp", action="store_true", help="let No-PP compete"
    )
    report.add_argument(
        "--summary",
        action="store_true",
        help="print mean, std and ratio to No-PP of every cell instead",
    )

    validate = commands.add_parser("validate", help="run the self-check suite")
    validate.add_argument("--quick", action="store_true")
    return parser


def _print_frame(frame: pd.DataFrame, stream: TextIO) -> None:
    if frame.empty:
        stream.write(" ".join(frame.columns) + "\n")
        return
    stream.write(frame.to_string(index=False) + "\n")


def _win_table_frame(entries: Sequence[WinTableEntry]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "dataset": entry.key.dataset,
                "protocol": entry.key.protocol.value,
                "epsilon": entry.key.epsilon,
                "metric": entry.key.metric.value,
                "best_pp": entry.best_pp.label,
                "win_fraction": entry.win_fraction,
                "wins": f"{entry.wins}/{entry.repeats}",
            }
            for entry in entries
        ],
        columns=WIN_TABLE_COLUMNS,
    )


def _summary_frame(summaries: Sequence[UtilitySummary]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "dataset": summary.key.dataset,
                "protocol": summary.key.protocol.value,
                "epsilon": summary.key.epsilon,
                "metric": summary.key.metric.value,
                "pp": summary.pp.label,
                "mean": summary.mean,
                "std": summary.std,
                "ratio_to_no_pp": summary.ratio_to_no_pp,
            }
            for summary in summaries
        ],
        columns=SUMMARY_COLUMNS,
    )


def _generate(args: argparse.Namespace, stdout: TextIO) -> int:
    config = GeneratorConfig(
        kind=args.kind,
        n=args.n,
        d=args.d,
        mu=args.mu,
        sd=args.sd,
        s=args.s,
        seed=args.seed,
    )
    population = SyntheticPopulationGenerator().generate(config, args.name)
    path = PopulationFileRepository().write(population, args.out)
    stdout.write(f"{path}\n")
    return EXIT_OK


def _run(args: argparse.Namespace, stdout: TextIO, stderr: TextIO) -> int:
    config = load_experiment_config(args.config)
    telemetry_config = TelemetryConfig.from_environment()
    tracing = create_tracing_provider(telemetry_config)
    metrics_recorder = create_metrics_recorder(telemetry_config)
    tracing.sync_trace_context()
    try:
        use_case = create_run_experiment_use_case(
            config,
            max_concurrent_tasks=args.max_concurrent_tasks,
            metrics_recorder=metrics_recorder,
            tracing=tracing,
        )
        output_dir = args.out or config.output_dir
        run = asyncio.run(use_case.execute(config.matrix(), config.formats, output_dir))
    finally:
        metrics_recorder.shutdown()
        tracing.shutdown()

    for path in run.files:
        stdout.write(f"{path}\n")
    if run.failed_cells:
        stderr.write(
            f"ldp-bench: {run.failed_cells} of {len(run.results)} cells failed; "
            "see the log for details\n"
        )
        return EXIT_FAILURE
    return EXIT_OK


def _report(args: argparse.Namespace, stdout: TextIO) -> int:
    use_case = create_report_use_case()
    report_filter = ReportFilter(
        metric=args.metric,
        dataset=args.dataset,
        protocol=args.protocol,
        epsilon=args.epsilon,
    )
    if args.summary:
        summaries = use_case.summary(args.input, report_filter)
        _print_frame(_summary_frame(summaries), stdout)
    else:
        entries = use_case.win_table(
            args.input,
            report_filter,
            include_baseline=args.include_no_pp,
            by_mean=args.by_mean,
        )
        _print_frame(_win_table_frame(entries), stdout)
    return EXIT_OK


def _validate(args: argparse.Namespace, stdout: TextIO) -> int:
    checks = create_validation_service().run(quick=args.quick)
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        stdout.write(f"{status} {check.name}: {check.detail}\n")
    return EXIT_OK if all(check.passed for check in checks) else EXIT_FAILURE


def cli_main(
    argv: Sequence[str] | None = None,
    *,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    """Entry point of the ``ldp-bench`` script; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        settings = BenchmarkSettings.from_environment()
        setup_logging(settings.log_level)
    except ValueError as exc:
        stderr.write(f"ldp-bench: {exc}\n")
        return EXIT_USAGE

    try:
        if args.command == "generate":
            return _generate(args, stdout)
        if args.command == "run":
            return _run(args, stdout, stderr)
        if args.command == "report":
            return _report(args, stdout)
        return _validate(args, stdout)
    except DomainError as exc:
        log_event(
            logger,
            logging.ERROR,
            "Command failed",
            event="command_failed",
            command=args.command,
            error_type=type(exc).__name__,
            error=str(exc),
        )
        stderr.write(f"ldp-bench {args.command}: {exc}\n")
        return EXIT_FAILURE
