"""
Compute the magnetization and susceptibility over a grid of temperatures and
fields.
"""
import argparse

from . import add_common_args, load_config, output_file, EXIT_SUCCESS, EXIT_PARTIAL
from ..models.observables import thermo_sweep
from ..util.fileio import provenance, write_thermo_csv
from ..util.parallel import RandomStream


def add_args(parser):
    return add_common_args(parser)


def parse_args(options=None):
    parser = add_args(argparse.ArgumentParser(description='Thermodynamic sweep.',
                                              formatter_class=argparse.ArgumentDefaultsHelpFormatter))
    return parser.parse_args() if options is None else parser.parse_args(options)


def main(args):
    cfg = load_config(args)
    grid = cfg.require_grid()
    points = thermo_sweep(cfg.model, grid, cfg.sweep, RandomStream(cfg.seed),
                          verbose=args.verbose)
    ofile = output_file(cfg, 'sweep.csv')
    write_thermo_csv(points, ofile, meta=provenance(cfg), overwrite=args.overwrite)
    nfail = sum([p.flags != 0 for p in points])
    if nfail > 0:
        print(f'{nfail} of {len(points)} points flagged; see the flags column of {ofile}.')
        return EXIT_PARTIAL
    return EXIT_SUCCESS
