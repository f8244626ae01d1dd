import argparse
import json
import logging
import sys

from cubica.codec import validate
from cubica.commands import EXIT_FAILED, EXIT_OK
from cubica.config import settings
from cubica.models import Report, SuiteConfig
from cubica.reports import get_report_sink
from cubica.suites import SUITES, run_suite

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Run a seeded verification suite")
    parser.add_argument("suite", choices=sorted(SUITES))
    parser.add_argument("--trials", type=int, default=settings.TRIALS)
    parser.add_argument("--seed", type=int, default=0, help="Ignored when CUBICA_SEED is set")
    parser.add_argument("--max-dimension", type=int, default=settings.MAX_DIMENSION)
    parser.add_argument("--input", dest="inputs", action="append", default=[], help="Form file to check as well")
    parser.add_argument("--output", default=None, help="Write the JSON report here")
    parser.set_defaults(handler=handle_verify)


def report_failures(report: Report) -> None:
    for check in report.failures():
        print(f"FAIL {check.case}: {check.lhs} != {check.rhs}", file=sys.stderr)
        if check.witness:
            print(f"  witness: {json.dumps(check.witness, sort_keys=True)}", file=sys.stderr)


def handle_verify(args: argparse.Namespace) -> int:
    seed = settings.SEED if settings.SEED is not None else args.seed
    if settings.SEED is not None and settings.SEED != args.seed:
        logger.info(f"CUBICA_SEED={settings.SEED} overrides --seed {args.seed}")
    data = {
        "suite": args.suite,
        "inputs": args.inputs,
        "trials": args.trials,
        "seed": seed,
        "max_dimension": args.max_dimension,
    }
    config = validate(SuiteConfig, data, "command line")
    report = run_suite(config)

    sink = get_report_sink(args.output)
    sink.write(report)
    print(report.to_json())

    if not report.passed:
        logger.error(f"{len(report.failures())} of {len(report.checks)} checks failed in suite {report.suite}")
        report_failures(report)
        return EXIT_FAILED
    return EXIT_OK
