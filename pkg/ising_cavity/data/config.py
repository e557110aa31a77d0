"""
Experiment configuration.

An experiment is described by a single JSON file, e.g.

.. code-block:: json

    {
        "seed": 12345,
        "model": {"kind": "poisson", "lam": 3.0},
        "solver": {"population_size": 200000, "workers": 1},
        "sweep": {"betas": [0.1, 0.2, 0.3], "fields": [0.01]},
        "exponents": {"fits": ["beta", "gamma"], "r2_min": 0.98},
        "oracle": {"n_trees": 100, "n_graphs": 20},
        "output": {"dir": "results"}
    }

Only ``seed`` and ``model`` are required.  Unknown keys are rejected at every
level.  Errors are raised as :class:`ConfigError`, whose message names the
line and column of a JSON syntax error or the dotted path of an invalid
field.

.. include:: ../include/links.rst
"""
import os
import json
import hashlib
import itertools

import numpy

from ..models.degree import make_model
from ..models.cavity import SolverConfig
from ..models.observables import SweepConfig
from ..models.criticality import ExponentConfig
from ..oracle.suite import OracleConfig


class ConfigError(ValueError):
    """
    Raised for an unreadable or invalid experiment configuration.
    """
    pass


def _check_keys(d, known, path):
    if not isinstance(d, dict):
        raise ConfigError(f'{path}: must be a JSON object.')
    unknown = [k for k in d.keys() if k not in known]
    if len(unknown) > 0:
        raise ConfigError(f'{path}: unknown keys {", ".join(sorted(unknown))}.')


def _build(path, func, *args):
    """
    Call a constructor, reraising validation errors with the field path.
    """
    try:
        return func(*args)
    except ConfigError:
        raise
    except (ValueError, TypeError, KeyError) as e:
        raise ConfigError(f'{path}: {e}') from e


class ExperimentConfig:
    """
    Validated experiment configuration.

    Args:
        seed (:obj:`int`):
            Master seed; required.
        model (:obj:`dict`):
            Degree model (see
            :func:`~ising_cavity.models.degree.DegreeModel.from_dict`).
        solver (:obj:`dict`, optional):
            :class:`~ising_cavity.models.cavity.SolverConfig` parameters.
        sweep (:obj:`dict`, optional):
            Sweep grid and budgets.  The grid is given either as explicit
            ``grid`` pairs ``[[beta, B], ...]`` or as the product of
            ``betas`` and ``fields``; the other keys are
            ``n_magnetization``, ``n_spines``, ``warm_start``, and
            ``ell_max``.
        exponents (:obj:`dict`, optional):
            ``fits`` to run and any
            :class:`~ising_cavity.models.criticality.ExponentConfig`
            parameters.
        oracle (:obj:`dict`, optional):
            :class:`~ising_cavity.oracle.suite.OracleConfig` parameters.
        output (:obj:`dict`, optional):
            Output settings; ``dir`` is the output directory.
    """
    keys = ['seed', 'model', 'solver', 'sweep', 'exponents', 'oracle', 'output']
    """Top-level keys of the configuration file."""

    fits = ['beta', 'delta', 'gamma', 'gamma_prime_lb']
    """Available exponent fits."""

    sweep_keys = ['grid', 'betas', 'fields', 'n_magnetization', 'n_spines', 'warm_start',
                  'ell_max']

    def __init__(self, seed, model, solver=None, sweep=None, exponents=None, oracle=None,
                 output=None):
        if seed is None or isinstance(seed, bool) or not isinstance(seed, (int, numpy.integer)) \
                or seed < 0 or seed >= 2**64:
            raise ConfigError('seed: must be an unsigned 64-bit integer.')
        self.seed = int(seed)

        self.model = _build('model', make_model, model)

        self.solver = _build('solver', SolverConfig.from_dict, {} if solver is None else solver)
        if self.solver.seed is None:
            self.solver.seed = self.seed

        _sweep = {} if sweep is None else sweep
        _check_keys(_sweep, self.sweep_keys, 'sweep')
        self.grid = self._parse_grid(_sweep)
        self.sweep = _build('sweep', SweepConfig, self.solver,
                            _sweep.get('n_magnetization', 100000),
                            _sweep.get('n_spines', 100000), _sweep.get('warm_start', True),
                            _sweep.get('ell_max', None))

        if not isinstance(exponents, (dict, type(None))):
            raise ConfigError('exponents: must be a JSON object.')
        _exponents = {} if exponents is None else dict(exponents)
        self.selected_fits = _exponents.pop('fits', list(self.fits))
        if not isinstance(self.selected_fits, list) or len(self.selected_fits) == 0:
            raise ConfigError('exponents.fits: must be a nonempty list.')
        unknown = [f for f in self.selected_fits if f not in self.fits]
        if len(unknown) > 0:
            raise ConfigError(f'exponents.fits: unknown fits {", ".join(map(str, unknown))}; '
                              f'options are {", ".join(self.fits)}.')
        if 'solver' in _exponents:
            _solver = {**self.solver.to_dict(),
                       **_build('exponents.solver', dict, _exponents['solver'])}
            _exponents['solver'] = _build('exponents.solver', SolverConfig.from_dict, _solver)
        else:
            _exponents['solver'] = self.solver
        self.exponents = _build('exponents', ExponentConfig.from_dict, _exponents)

        self.oracle = _build('oracle', OracleConfig.from_dict, {} if oracle is None else oracle)
        for i, g in enumerate(self.oracle.graphs):
            _check_keys(g, ['n', 'edges', 'beta', 'B'], f'oracle.graphs.{i}')

        _output = {} if output is None else output
        _check_keys(_output, ['dir'], 'output')
        self.output_dir = _output.get('dir', '.')

    def _parse_grid(self, sweep):
        if 'grid' in sweep and ('betas' in sweep or 'fields' in sweep):
            raise ConfigError('sweep: give either grid or betas and fields, not both.')
        if 'grid' in sweep:
            grid = sweep['grid']
            if not isinstance(grid, list) \
                    or any(not isinstance(p, list) or len(p) != 2 for p in grid):
                raise ConfigError('sweep.grid: must be a list of [beta, B] pairs.')
            return [(float(b), float(B)) for b, B in grid]
        if 'betas' in sweep or 'fields' in sweep:
            if 'betas' not in sweep or 'fields' not in sweep:
                raise ConfigError('sweep: betas and fields must be given together.')
            for k in ['betas', 'fields']:
                if not isinstance(sweep[k], list):
                    raise ConfigError(f'sweep.{k}: must be a list.')
            return [(float(b), float(B)) for b, B in itertools.product(sweep['betas'],
                                                                       sweep['fields'])]
        return []

    @classmethod
    def from_dict(cls, d):
        """
        Construct the configuration from a parsed JSON object.
        """
        _check_keys(d, cls.keys, 'config')
        if 'seed' not in d:
            raise ConfigError('seed: required; there is no default seed.')
        if 'model' not in d:
            raise ConfigError('model: required.')
        return cls(**d)

    @classmethod
    def from_file(cls, ifile):
        """
        Read the configuration from a JSON file.

        Raises:
            FileNotFoundError:
                Raised if the file does not exist.
            ConfigError:
                Raised if the file is not valid JSON or the configuration
                is invalid.
        """
        if not os.path.isfile(ifile):
            raise FileNotFoundError(f'{ifile} does not exist!')
        with open(ifile, 'r') as f:
            text = f.read()
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f'{ifile}: line {e.lineno}, column {e.colno}: {e.msg}') from e
        return cls.from_dict(d)

    def apply_overrides(self, seed=None, workers=None, out=None):
        """
        Apply command-line overrides.

        Args:
            seed (:obj:`int`, optional):
                Replacement master seed.
            workers (:obj:`int`, optional):
                Number of worker threads.
            out (:obj:`str`, optional):
                Output directory.
        """
        if seed is not None:
            if seed < 0 or seed >= 2**64:
                raise ConfigError('--seed: must be an unsigned 64-bit integer.')
            if self.solver.seed == self.seed:
                self.solver.seed = int(seed)
            self.seed = int(seed)
        if workers is not None:
            if workers < 1:
                raise ConfigError('--workers: must be a positive integer.')
            self.solver.workers = int(workers)
            self.exponents.solver.workers = int(workers)
        if out is not None:
            self.output_dir = out

    def require_grid(self):
        """
        Return the sweep grid, raising if it is empty.
        """
        if len(self.grid) == 0:
            raise ConfigError('sweep: the grid is empty; give grid or betas and fields.')
        return self.grid

    def to_dict(self):
        """
        Canonical form of the configuration, with all defaults filled in.
        """
        sweep = self.sweep.to_dict()
        sweep.pop('solver')
        return {'seed': self.seed, 'model': self.model.to_dict(),
                'solver': self.solver.to_dict(),
                'sweep': {'grid': [list(p) for p in self.grid], **sweep},
                'exponents': {'fits': list(self.selected_fits), **self.exponents.to_dict()},
                'oracle': self.oracle.to_dict(), 'output': {'dir': self.output_dir}}

    def config_hash(self):
        """
        SHA-256 hash of the canonical configuration.

        The worker count and the output directory are excluded, so the hash
        identifies the numerical content of an experiment.
        """
        d = self.to_dict()
        d.pop('output')
        d['solver'].pop('workers')
        d['exponents']['solver'].pop('workers')
        text = json.dumps(d, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(text.encode('utf-8')).hexdigest()


def resolve_workers(workers=None):
    """
    Number of worker threads: the command-line value if given, otherwise
    the ``ISING_CAVITY_WORKERS`` environment variable.  Returns None if
    neither is set, leaving the configured value (default 1) in place.
    """
    if workers is not None:
        return workers
    env = os.environ.get('ISING_CAVITY_WORKERS')
    if env is None or env.strip() == '':
        return None
    try:
        return int(env)
    except ValueError as e:
        raise ConfigError(f'ISING_CAVITY_WORKERS: must be an integer, not "{env}".') from e
