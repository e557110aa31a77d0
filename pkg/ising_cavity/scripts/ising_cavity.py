"""
Single entry point for the ``critical``, ``sweep``, ``exponents``, and
``oracle`` subcommands.
"""
import sys
import argparse

from . import critical, sweep, exponents, oracle, EXIT_FAILURE
from ..data.config import ConfigError

subcommands = {'critical': (critical, 'Forward-degree moments and the critical temperature.'),
               'sweep': (sweep, 'Magnetization and susceptibility over a (beta, B) grid.'),
               'exponents': (exponents, 'Critical-exponent fits.'),
               'oracle': (oracle, 'Exact-oracle equivalence checks.')}


def parse_args(options=None):

    parser = argparse.ArgumentParser(description='Ising model on random trees and graphs.',
                                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True
    for name, (module, descr) in subcommands.items():
        p = sub.add_parser(name, help=descr, description=descr,
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        module.add_args(p)
        p.set_defaults(func=module.main)
    return parser.parse_args() if options is None else parser.parse_args(options)


def main(args):
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as e:
        print(f'Configuration error: {e}', file=sys.stderr)
        return EXIT_FAILURE
