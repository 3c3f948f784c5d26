import argparse
import sys

import epiqbd.log

from epiqbd.data.fixture import FIXTURE_KEYS


_logger = epiqbd.log.getLogger(__name__)

EXIT_USAGE = 1


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors exiting 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def verbosity_from_arguments(arguments):
    """-q = -1, every -v adds one, None if neither was given."""
    if arguments.quiet:
        return -arguments.quiet
    if arguments.verbosity:
        return arguments.verbosity
    return None


def positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "invalid integer: %r" % (value,)) from None
    if number < 1:
        raise argparse.ArgumentTypeError("must be >= 1, got %d" % (number))
    return number


def seed(value):
    try:
        number = int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "invalid seed: %r" % (value,)) from None
    if not 0 <= number < 1 << 64:
        raise argparse.ArgumentTypeError(
            "seed must be an unsigned 64 bit integer")
    return number


def tolerance(value):
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "invalid tolerance: %r" % (value,)) from None
    if not 0 < number <= 1e-3:
        raise argparse.ArgumentTypeError(
            "invalid tolerance %g, must lie in (0, 1e-3]" % (number))
    return number


def pair_list(value):
    """Parse "1:2,0:1" (or "1-2,0-1") into ((1, 2), (0, 1))."""
    pairs = []
    for item in value.split(","):
        parts = item.replace("-", ":").split(":")
        try:
            (d1, d2) = (int(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(
                "invalid pair %r, expected d1:d2" % (item,)) from None
        if d1 < 0 or d2 < 0 or d1 == d2:
            raise argparse.ArgumentTypeError(
                "pair %r needs distinct batch sizes >= 0" % (item,))
        pairs.append((d1, d2))
    return tuple(pairs)


def _common_parser():
    parser = ArgumentParser(add_help=False)
    group = parser.add_argument_group("common options")
    group.add_argument(
        "-v",
        dest="verbosity",
        action="count",
        default=0,
        help="-v = INFO, -vv = VERBOSE, -vvv = DEBUG, -vvvv = TRACE",
    )
    group.add_argument(
        "-q",
        dest="quiet",
        action="count",
        default=0,
        help="only log errors, -qq = log nothing",
    )
    group.add_argument(
        "-j",
        dest="jobs",
        metavar="jobs",
        type=positive_int,
        help="maximum number of jobs (defaults to host CPU count, "
             "maximum: 4)",
    )
    return parser


def _add_convention(parser):
    parser.add_argument(
        "--convention",
        choices=("event", "flow"),
        help="read estimated infection rates as batch event rates or as "
             "new case flows (default from settings: flow)",
    )


def _add_engine(parser, default):
    parser.add_argument(
        "--engine",
        choices=("closed_form", "uniformization"),
        default=default,
        help="how expected trajectories are computed (default: %(default)s)",
    )


def _add_change_point(parser):
    parser.add_argument(
        "--change-point",
        dest="change_points",
        metavar="T",
        type=positive_int,
        action="append",
        default=[],
        help="first day of a new regime, may be repeated",
    )


def _add_lax(parser):
    parser.add_argument(
        "--lax",
        action="store_true",
        help="log series inconsistencies as warnings instead of failing",
    )


def get_parser():
    common = _common_parser()
    parser = ArgumentParser(
        prog="epicast",
        description="batch infection Markov models of epidemic daily series")
    parser.add_argument(
        "-V",
        dest="version",
        action="store_true",
        help="print version"
    )
    commands = parser.add_subparsers(dest="command", metavar="command")

    p = commands.add_parser(
        "estimate", parents=[common],
        help="estimate infection and disappearance rates from a series")
    p.add_argument("--input", required=True, metavar="F",
                   help="daily series CSV")
    _add_change_point(p)
    p.add_argument(
        "--detect", action="store_true",
        help="scan the series for a change point and split there")
    _add_lax(p)

    p = commands.add_parser(
        "simulate", parents=[common],
        help="exact stochastic simulation of a parameter file")
    p.add_argument("--params", required=True, metavar="P",
                   help="parameter JSON file")
    p.add_argument("--days", required=True, type=positive_int, metavar="D")
    p.add_argument("--reps", type=positive_int, metavar="R",
                   help="replications (default from settings: 1000)")
    p.add_argument("--seed", type=seed, metavar="S",
                   help="seed (default from settings: 0)")
    p.add_argument("--out", required=True, metavar="F",
                   help="ensemble CSV: day,mean,var,p05,p95")
    p.add_argument("--trace", metavar="F",
                   help="per group counts of the first replication")
    _add_convention(p)

    p = commands.add_parser(
        "transient", parents=[common],
        help="expected active cases of a parameter file")
    p.add_argument("--params", required=True, metavar="P",
                   help="parameter JSON file")
    p.add_argument("--days", required=True, type=positive_int, metavar="D")
    p.add_argument("--tol", type=tolerance, metavar="E",
                   help="truncation tolerance in (0, 1e-3] "
                        "(default from settings: 1e-10)")
    p.add_argument("--out", required=True, metavar="F",
                   help="trajectory CSV: t,total,group_0,...,mass_defect")
    p.add_argument("--svg", metavar="F", help="also draw the trajectory")
    _add_engine(p, "uniformization")
    _add_convention(p)

    p = commands.add_parser(
        "fit", parents=[common],
        help="fit mixture weights to a series")
    p.add_argument("--input", required=True, metavar="F",
                   help="daily series CSV")
    _add_change_point(p)
    p.add_argument("--pairs", type=pair_list, metavar="LIST",
                   default=((0, 1), (0, 2), (1, 2)),
                   help="candidate batch size pairs, e.g. 0:1,0:2,1:2 "
                        "(the default)")
    p.add_argument("--params-out", metavar="P",
                   help="write the fitted model as a parameter file")
    _add_convention(p)
    _add_lax(p)

    p = commands.add_parser(
        "intervene", parents=[common],
        help="control effect ratio of an intervention scenario")
    p.add_argument("--params", required=True, metavar="P",
                   help="parameter JSON file of the baseline")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--scenario", metavar="S", help="scenario JSON file")
    group.add_argument(
        "--standard", action="store_true",
        help="compare rate halving, batch shift and k halving")
    p.add_argument("--days", required=True, type=positive_int, metavar="D")
    p.add_argument("--out", required=True, metavar="F", help="rho CSV")
    p.add_argument("--svg", metavar="F", help="also draw the rho curves")
    _add_engine(p, "closed_form")
    _add_convention(p)

    p = commands.add_parser(
        "reproduce", parents=[common],
        help="re-run the analysis of a bundled country series")
    p.add_argument("--country", required=True, choices=FIXTURE_KEYS)
    p.add_argument("--outdir", metavar="DIR",
                   help="output directory (default from settings)")
    p.add_argument("--days", type=positive_int, metavar="D",
                   help="horizon in days (default: the observed days)")
    _add_convention(p)

    return parser


def get(argv=None):
    parser = get_parser()
    arguments = parser.parse_args(argv)
    for argument, value in vars(arguments).items():
        _logger.debug("%s: %s", argument, value)
    return (parser, arguments)
