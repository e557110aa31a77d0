"""
Run the oracle equivalence checks.

Failing instances are written to the ``failures`` subdirectory of the output
directory as edge lists, with a JSON file holding the parameters, so that
they can be replayed.
"""
import os
import argparse

from . import add_common_args, load_config, output_file, EXIT_SUCCESS, EXIT_FAILURE
from ..data.graph import GraphInstance, TreeInstance
from ..oracle.suite import report_suite, run_suite
from ..util.fileio import provenance, write_json
from ..util.parallel import RandomStream


def add_args(parser):
    return add_common_args(parser)


def parse_args(options=None):
    parser = add_args(argparse.ArgumentParser(description='Oracle equivalence checks.',
                                              formatter_class=argparse.ArgumentDefaultsHelpFormatter))
    return parser.parse_args() if options is None else parser.parse_args(options)


def write_failures(results, odir, record=None, overwrite=False):
    """
    Write the failing instances of each check.

    Args:
        results (:obj:`dict`):
            Output of :func:`~ising_cavity.oracle.suite.run_suite`.
        odir (:obj:`str`):
            Directory for the files; created if needed.
        record (:obj:`dict`, optional):
            Provenance of the run (see
            :func:`~ising_cavity.util.fileio.provenance`).  The seed and
            configuration hash are copied into each parameter file.
        overwrite (:obj:`bool`, optional):
            Overwrite existing files.

    Returns:
        :obj:`list`: The names of the files written.
    """
    replay = {} if record is None else {k: record[k] for k in ['seed', 'config_hash']}
    files = []
    for name, r in results.items():
        for i, f in enumerate(r['failures']):
            if not os.path.isdir(odir):
                os.makedirs(odir)
            root = os.path.join(odir, f'{name}-{i:04d}')
            instance = f['instance']
            if 'tree' in instance:
                t = instance['tree']
                TreeInstance(t['children'], root=t['root']).write(f'{root}.tree',
                                                                  overwrite=overwrite)
                files += [f'{root}.tree']
            else:
                g = instance['graph']
                GraphInstance(g['n'], g['edges']).write(f'{root}.graph', overwrite=overwrite)
                files += [f'{root}.graph']
            write_json({**{k: v for k, v in f.items() if k != 'instance'},
                        'beta': instance['beta'], 'B': instance['B'], 'check': name, **replay},
                       f'{root}.json', overwrite=overwrite)
            files += [f'{root}.json']
    return files


def main(args):
    cfg = load_config(args)
    results = run_suite(cfg.oracle, RandomStream(cfg.seed), verbose=args.verbose)
    report_suite(results)
    ofile = output_file(cfg, 'oracle.json')
    record = provenance(cfg)
    write_json({'checks': results, 'provenance': record}, ofile,
               overwrite=args.overwrite)
    passed = all(r['passed'] for r in results.values())
    if not passed:
        files = write_failures(results, os.path.join(cfg.output_dir, 'failures'),
                               record=record, overwrite=args.overwrite)
        print(f'Wrote {len(files)} failure files to {os.path.join(cfg.output_dir, "failures")}.')
        return EXIT_FAILURE
    return EXIT_SUCCESS
