"""
Command-line scripts.

Each subcommand module provides ``add_args(parser)``, ``parse_args(options)``,
and ``main(args)``; :mod:`ising_cavity.scripts.ising_cavity` collects them
under a single executable.  ``main`` returns the exit code:

    - 0: success,
    - 1: an oracle check failed or the configuration is invalid,
    - 2: some sweep points failed,
    - 3: an exponent fit was rejected.
"""
import os

from ..data.config import ExperimentConfig, resolve_workers

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_PARTIAL = 2
EXIT_REJECTED = 3


def add_common_args(parser):
    """
    Add the arguments shared by all subcommands.
    """
    parser.add_argument('-c', '--config', type=str, required=True,
                        help='JSON file with the experiment configuration.')
    parser.add_argument('--seed', default=None, type=int,
                        help='Master seed; overrides the seed in the configuration file.')
    parser.add_argument('--workers', default=None, type=int,
                        help='Number of worker threads.  If not given, the '
                             'ISING_CAVITY_WORKERS environment variable is used, if set; '
                             'otherwise the value in the configuration file.  Results do not '
                             'depend on this number.')
    parser.add_argument('--out', default=None, type=str,
                        help='Output directory; overrides the directory in the configuration '
                             'file.')
    parser.add_argument('-o', '--overwrite', default=False, action='store_true',
                        help='Overwrite existing output files.')
    parser.add_argument('-v', '--verbose', default=False, action='store_true',
                        help='Show progress bars.')
    return parser


def load_config(args):
    """
    Read the configuration file and apply the command-line overrides.

    Returns:
        :class:`~ising_cavity.data.config.ExperimentConfig`: The
        configuration.
    """
    cfg = ExperimentConfig.from_file(args.config)
    cfg.apply_overrides(seed=args.seed, workers=resolve_workers(args.workers), out=args.out)
    return cfg


def output_file(cfg, name):
    """
    Path to an output file, creating the output directory if needed.
    """
    if not os.path.isdir(cfg.output_dir):
        os.makedirs(cfg.output_dir)
    return os.path.join(cfg.output_dir, name)
