"""Command-line interface `bootlin`.

The interface has four subcommands:

    estimate    point estimate, standard error, and Wald interval
    interval    bootstrap confidence interval
    simulate    Monte Carlo coverage study
    diag        numerical property checks

Exit codes are 0 on success, 1 if a check failed, 2 for unreadable
input or invalid arguments, 3 for degenerate data, and 4 for numerical
failures.
"""

import argparse
import logging
import sys

from . import __version__
from . import config
from . import diagnostics
from . import prng
from .bootstrap import parse_policy
from .bootstrap import parse_scheme
from .bootstrap import run_replicates
from .bootstrap import scheme_density
from .bootstrap import validate_configuration
from .data import read_causal_sample
from .data import read_sample
from .errors import DataFormatError
from .errors import DegenerateDataError
from .errors import DomainError
from .errors import InsufficientDataError
from .errors import NumericError
from .errors import UnsupportedOperationError
from .estimators import AverageDensity
from .estimators import GComputation
from .estimators import NuisanceSpec
from .intervals import METHODS
from .intervals import IntervalSpec
from .intervals import construct
from .intervals import wald
from .simulation import run_study


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_DEGENERATE = 3
EXIT_NUMERIC = 4

DEFAULT_OUTPUT = 'coverage.csv'


def _make_parameter(args):
    """Create the parameter object described by the estimator flags."""
    if args.param == 'gcomp':
        return GComputation(args.construction, args.mu, args.g)

    nuisance = NuisanceSpec(kernel=args.kernel, bandwidth=args.bandwidth, tmle=args.tmle)
    return AverageDensity(args.construction, nuisance)


def _read_data(args):
    if args.param == 'gcomp':
        return read_causal_sample(args.data)

    return read_sample(args.data)


def _nuisance_label(param, report):
    if isinstance(param, GComputation):
        return param.nuisance_label

    label = f'{report.bandwidth:.7g} ({param.nuisance})'
    if report.bandwidth_fell_back:
        label += ', fell back to silverman'

    return label


def estimate(args):
    """Print the point estimate, its standard error, and a Wald interval."""
    param = _make_parameter(args)
    data = _read_data(args)

    report = param.report(param.fit(data))
    bounds = wald(report, IntervalSpec.equi_tailed(0.95))

    print(f'n          = {report.n}')
    print(f'psi_hat    = {report.psi_hat:.7f}')
    print(f'sigma_hat  = {report.sigma_hat:.7f}')
    print(f'wald_95    = [{bounds.lo:.7f}, {bounds.hi:.7f}]')
    print(f'nuisance   = {_nuisance_label(param, report)}')

    return EXIT_OK


def interval(args):
    """Print a bootstrap confidence interval."""
    param = _make_parameter(args)
    spec = IntervalSpec(args.alpha, args.beta, args.method)
    scheme = parse_scheme(args.scheme, args.kernel)
    policy = parse_policy(args.policy)
    validate_configuration(param, scheme)

    data = _read_data(args)
    fit = param.fit(data)
    report = param.report(fit)
    replicates = None

    # The Wald interval does not use the bootstrap at all.
    if spec.method != 'wald':
        if args.B < 1:
            raise DomainError(f'At least one replicate is required, got B = {args.B}')

        stream = prng.RngStream(args.seed, (prng.BOOTSTRAP,))
        replicates = run_replicates(
            param, data, scheme, policy, args.B, stream, fit=fit, n_jobs=args.threads
        )
        report = param.report(fit, scheme_density(scheme, param, fit))

    result = construct(spec, report, replicates)

    print(f'method     = {spec.method}')
    print(f'level      = {spec.level:.6g}')
    print(f'psi_hat    = {report.psi_hat:.7f}')
    print(f'interval   = [{result.lo:.7f}, {result.hi:.7f}]')

    if replicates is not None:
        print(f'scheme     = {scheme}')
        print(f'policy     = {policy}')
        print(f'B          = {replicates.B} ({replicates.n_invalid} invalid)')
        print(f'centering  = {report.centering_bias:.7g}')

    return EXIT_OK


def simulate(args):
    """Run a coverage study and write its table as CSV."""
    overrides = list(args.overrides)
    for key in ('seed', 'threads'):
        value = getattr(args, key)
        if value is not None:
            overrides.append(f'{key}={value}')

    cfg, output = config.load(args.config, overrides)
    output = args.output or output or DEFAULT_OUTPUT

    table = run_study(cfg)
    table.to_csv(output)

    print(output)
    return EXIT_OK


def diag(args):
    """Run the numerical property checks and print a pass/fail table."""
    if args.list:
        for name, (_, description) in diagnostics.CHECKS.items():
            print(f'{name:<26} {description}')

        return EXIT_OK

    names = args.checks or None
    if names is not None:
        unknown = sorted(set(names) - set(diagnostics.CHECKS))
        if unknown:
            raise DomainError(f'Unknown checks {unknown}')

    results = diagnostics.run_checks(names, tolerance_scale=args.tolerance_scale)

    for result in results:
        status = 'PASS' if result.passed else 'FAIL'
        print(f'{result.name:<26} {status}  {result.discrepancy:.3e} <= {result.tolerance:.3e}')

    failed = sum(not result.passed for result in results)
    print(f'{len(results) - failed} of {len(results)} checks passed')

    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _add_estimator_arguments(parser):
    parser.add_argument('--data', required=True, help='Input file')
    parser.add_argument(
        '--param', choices=('avgdensity', 'gcomp'), default='avgdensity',
        help='Target parameter'
    )
    parser.add_argument(
        '--construction', default='onestep',
        help='onestep, plugin, meanplugin (avgdensity); onestep, ee (gcomp)'
    )
    parser.add_argument('--kernel', default='gauss', help='gauss or gauss4')
    parser.add_argument(
        '--bandwidth', default='sj',
        help='silverman, sj, fixed:H, or under:RULE:EXPONENT'
    )
    parser.add_argument('--tmle', action='store_true', help='Target the density nuisance')
    parser.add_argument('--mu', default='linear', help='Outcome regression (gcomp)')
    parser.add_argument('--g', default='logistic', help='Propensity score (gcomp)')


def make_parser():
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog='bootlin',
        description='Bootstrap inference for asymptotically linear estimators'
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='store_true', help='Log debug output')

    subparsers = parser.add_subparsers(dest='command', required=True)

    p = subparsers.add_parser('estimate', help='Estimate the parameter')
    _add_estimator_arguments(p)
    p.set_defaults(func=estimate)

    p = subparsers.add_parser('interval', help='Bootstrap confidence interval')
    _add_estimator_arguments(p)
    p.add_argument('--method', choices=METHODS, default='perc', help='Interval method')
    p.add_argument('--scheme', default='empirical', help='empirical, smooth, or smooth:RULE[+tmle]')
    p.add_argument('--policy', default='refit', help='refit or fixed')
    p.add_argument('-B', type=int, default=1000, help='Number of bootstrap replicates')
    p.add_argument('--seed', type=int, default=0, help='Root seed')
    p.add_argument('--alpha', type=float, default=0.025, help='Lower tail probability')
    p.add_argument('--beta', type=float, default=0.025, help='Upper tail probability')
    p.add_argument('--threads', type=int, default=-1, help='Worker threads; -1 uses all cores')
    p.set_defaults(func=interval)

    p = subparsers.add_parser('simulate', help='Run a coverage study')
    p.add_argument('--config', default=None, help='Configuration file')
    p.add_argument(
        '--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
        help='Override a configuration key; may be repeated'
    )
    p.add_argument('--seed', type=int, default=None, help='Root seed')
    p.add_argument('--threads', type=int, default=None, help='Parallel workers')
    p.add_argument('--output', default=None, help='Output CSV file')
    p.set_defaults(func=simulate)

    p = subparsers.add_parser('diag', help='Run numerical property checks')
    p.add_argument('--list', action='store_true', help='List the checks and exit')
    p.add_argument(
        '--check', dest='checks', action='append', default=[], metavar='NAME',
        help='Run only the named check; may be repeated'
    )
    p.add_argument('--tolerance-scale', type=float, default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(func=diag)

    return parser


def _fail(error, code):
    print(f'bootlin: error: {error}', file=sys.stderr)
    return code


def main(argv=None):
    """Run the command-line interface and return its exit code."""
    parser = make_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s'
    )

    try:
        return args.func(args)
    except (DegenerateDataError, InsufficientDataError) as error:
        return _fail(error, EXIT_DEGENERATE)
    except NumericError as error:
        return _fail(error, EXIT_NUMERIC)
    except (DataFormatError, DomainError, UnsupportedOperationError, OSError) as error:
        return _fail(error, EXIT_INVALID)
