import argparse

from qcal.calculus.qexp import radius_of_convergence
from qcal.cli.common import ExitCode, positive_float


def cmd_radius(args: argparse.Namespace) -> int:
    print(repr(radius_of_convergence(args.q).radius))
    return ExitCode.OK


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("radius", help="radius of convergence of the improved series")
    parser.add_argument("--q", type=positive_float, required=True)
    parser.set_defaults(handler=cmd_radius)
