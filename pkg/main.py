"""
regenmc command-line entry point.

    python main.py [--config FILE] [--output-dir DIR] [--log-level LEVEL] \
        {simulate,estimate,probit-regen,diagnose} [options]

Exit codes: 0 success, 1 check or estimation failure, 2 usage, config or
parse error.
"""

import argparse
import sys
from typing import Any, Callable, Dict, List, Optional

from config.manager import ExperimentManager
from tools.diagnose import cmd_diagnose
from tools.estimate import cmd_estimate
from tools.probit_regen import cmd_probit_regen
from tools.simulate import cmd_simulate
from utils.errors import ConfigError, ParseError, RegenError
from utils.io import dumps_json
from utils.logger import logger, set_log_level

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

COMMANDS: Dict[str, Callable[[Any], Dict[str, Any]]] = {
    'simulate': cmd_simulate,
    'estimate': cmd_estimate,
    'probit-regen': cmd_probit_regen,
    'diagnose': cmd_diagnose,
}

GLOBAL_OPTIONS = ('command', 'config', 'log_level')


def _add_seed(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--seed', type=int, help='root seed (required, here or in --config)')


def _add_fixture_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group('fixture chain')
    group.add_argument('--fixture', choices=['two-state', 'ar1'])
    group.add_argument('--a', type=float, help='two-state P(0 -> 1)')
    group.add_argument('--b', type=float, help='two-state P(1 -> 0)')
    group.add_argument('--lag', type=int, help='minorization lag l')
    group.add_argument('--h-scale', dest='h_scale', type=float,
                       help='scale factor on h in [0, 1]; 0 disables regeneration')
    group.add_argument('--rho', type=float, help='AR(1) coefficient')
    group.add_argument('--noise-sd', dest='noise_sd', type=float, help='AR(1) innovation sd')
    group.add_argument('--small-set', dest='small_set', type=float, help='AR(1) small-set radius c')


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog='regenmc',
        description='Regenerative MCMC output analysis: split chains, covariance '
                    'estimators and strong-invariance diagnostics.',
    )
    parser.add_argument('--config', help='JSON or YAML file with command options (flags override)')
    parser.add_argument('--output-dir', dest='output_dir', help='directory for CSV/JSON artifacts')
    parser.add_argument('--log-level', dest='log_level',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='logging level')
    subparsers = parser.add_subparsers(dest='command', required=True)

    simulate = subparsers.add_parser('simulate', help='simulate a fixture split chain')
    _add_fixture_options(simulate)
    simulate.add_argument('--n', type=int, help='chain length')
    _add_seed(simulate)

    estimate = subparsers.add_parser('estimate', help='estimate Sigma_f from trace/tours files')
    estimate.add_argument('--tours', help='tours CSV (k, tau, z_1..)')
    estimate.add_argument('--trace', help='trace CSV (t, delta, x_1..)')
    estimate.add_argument('--lag', type=int, help='minorization lag of the trace')
    estimate.add_argument('--nu', type=float, help='batch size exponent, b_n = floor(n^nu)')
    estimate.add_argument('--delta', type=float, help='moment excess of f (2 + delta moments)')
    estimate.add_argument('--p', type=float, help='tour-length moment order')
    estimate.add_argument('--geometric', action='store_true', default=None,
                          help='the chain is geometrically ergodic')
    estimate.add_argument('--psd', action='store_true', default=None,
                          help='project estimates onto the PSD cone')
    estimate.add_argument('--centering', choices=['ratio', 'tour-mean'],
                          help='centering of tour sums in the regenerative estimator')
    estimate.add_argument('--matrix-csv', dest='matrix_csv', action='store_true', default=None,
                          help='also write each estimate as a matrix CSV')
    _add_seed(estimate)

    probit = subparsers.add_parser('probit-regen', help='regeneration experiment on the probit Gibbs sampler')
    probit.add_argument('--design', help='design CSV (x_1..x_p, y); bundled dataset by default')
    probit.add_argument('--p-scan', dest='p_scan', type=float, help='random-scan probability of a beta update')
    probit.add_argument('--steps', type=int, help='Gibbs steps')
    probit.add_argument('--pilot-iters', dest='pilot_iters', type=int, help='pilot sweeps')
    probit.add_argument('--quantile', type=float, help='small-set box quantile in (0, 0.5)')
    probit.add_argument('--scan', choices=['random', 'deterministic'])
    _add_seed(probit)

    diagnose = subparsers.add_parser('diagnose', help='strong-invariance diagnostics')
    _add_fixture_options(diagnose)
    diagnose.add_argument('--tours', help='tours CSV (file mode)')
    diagnose.add_argument('--trace', help='trace CSV (file mode)')
    diagnose.add_argument('--n', type=int, help='fixture chain length')
    diagnose.add_argument('--replications', type=int, help='CLT replications')
    diagnose.add_argument('--clt-n', dest='clt_n', type=int, help='chain length per CLT replication')
    diagnose.add_argument('--workers', type=int, help='joblib workers for the CLT replications')
    diagnose.add_argument('--no-l-invariance', dest='l_invariance', action='store_false', default=None,
                          help='skip the lag-invariance check')
    _add_seed(diagnose)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and map errors to exit codes.

    Args:
        argv: Arguments without the program name (sys.argv[1:] when None)

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    if args.log_level:
        set_log_level(args.log_level)

    flags = {k: v for k, v in vars(args).items() if k not in GLOBAL_OPTIONS}

    try:
        manager = ExperimentManager(args.command)
        config = manager.load(args.config, flags)
        if args.log_level:
            # the flag wins over REGENMC_LOG_LEVEL
            set_log_level(args.log_level)
        summary = COMMANDS[args.command](config)
    except (ConfigError, ParseError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except RegenError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_FAILURE
    except OSError as e:
        logger.error(f"{args.command}: I/O failure: {e}")
        return EXIT_FAILURE

    print(dumps_json(summary))
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
