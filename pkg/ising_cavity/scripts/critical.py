"""
Report the forward-degree moments and the critical temperature of a model.
"""
import argparse

import numpy

from . import add_common_args, load_config, output_file, EXIT_SUCCESS
from ..models.criticality import critical_beta
from ..util.fileio import provenance, write_json


def add_args(parser):
    return add_common_args(parser)


def parse_args(options=None):
    parser = add_args(argparse.ArgumentParser(description='Critical temperature of a degree '
                                                          'model.',
                                              formatter_class=argparse.ArgumentDefaultsHelpFormatter))
    return parser.parse_args() if options is None else parser.parse_args(options)


def critical_report(model):
    """
    Moments of the forward law and the critical temperature.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Degree model.

    Returns:
        :obj:`dict`: Report; infinite moments are ``numpy.inf``.
    """
    fm = model.forward()
    bc = critical_beta(fm)
    return {'model': model.to_dict(), 'mean_degree': float(model.mean),
            'nu': float(fm.nu), 'nu2': float(fm.nu2), 'nu3': float(fm.nu3),
            'nu_finite': fm.nu_finite, 'beta_c': float(bc),
            'beta_hat_c': float(numpy.tanh(bc))}


def print_report(report):
    print('-'*70)
    print(f'{"Critical temperature":^70}')
    print('-'*70)
    print(f'{"Model":>12}: {report["model"]}')
    print(f'{"E[D]":>12}: {report["mean_degree"]:.12g}')
    for k in ['nu', 'nu2', 'nu3']:
        v = report[k]
        print(f'{k:>12}: ' + ('inf' if numpy.isinf(v) else f'{v:.12g}'))
    bc = report['beta_c']
    msg = 'no transition' if numpy.isinf(bc) else f'{bc:.13f}'
    print(f'{"beta_c":>12}: {msg}')
    print('-'*70)


def main(args):
    cfg = load_config(args)
    report = critical_report(cfg.model)
    print_report(report)
    write_json({**report, 'provenance': provenance(cfg)}, output_file(cfg, 'critical.json'),
               overwrite=args.overwrite)
    return EXIT_SUCCESS
