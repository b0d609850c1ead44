# main.py

import argparse
import sys

from gammaform.config import COMMANDS
from gammaform.console import print_findings, print_verdict, setup_logging
from gammaform.runner import run


def parse_arguments(argv=None):
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(
        prog="gamma",
        description="Canonical-form projector verification and FFT solves",
    )
    parser.add_argument('command', choices=COMMANDS, help='what to run')
    parser.add_argument('--config', required=True, help='JSON run document')
    parser.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                        help='override a config entry by dotted path (repeatable)')
    parser.add_argument('--out', help='output directory (overrides output.directory)')
    parser.add_argument('-v', '--verbose', action='store_true', help='log at DEBUG level')
    return parser.parse_args(argv)


def summarize(report):
    """One verdict line per check of the report"""
    results = report.results
    if report.command == "verify":
        for name, symbol in results["symbols"].items():
            print_verdict(name, symbol["passed"], f"({symbol['samples']} samples)")
    elif report.command == "solve":
        solve = results["solve"]
        print_verdict(f"{solve['method']} solve", solve["converged"],
                      f"({solve['iterations']} iterations, constraint residual {solve['residual_constraint']:.2e})")
    elif report.command == "effective":
        print_verdict("effective operator", report.exit_code == 0,
                      f"(self-adjoint defect {results['effective']['selfadjoint_defect']:.2e})")
    else:
        willis = results["willis"]
        live = willis["lattice_size"] - willis["resonant_points"]
        print_verdict("willis oracle", willis["oracle_pass_count"] == live,
                      f"({willis['oracle_pass_count']}/{live} lattice points)")
    print_findings(report.findings.discrepant_count)


def main(argv=None):
    args = parse_arguments(argv)
    setup_logging(args.verbose)
    code, report = run(args.command, args.config, args.overrides, args.out)
    if report is not None:
        summarize(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
