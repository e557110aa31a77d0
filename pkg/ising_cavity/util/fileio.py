r"""
Output files and their provenance.

Every output carries the package version, the versions of the numerical
stack, the master seed, and the hash of the configuration that produced it.
Sweep results are written as comma-separated tables with `astropy.table.Table`_;
reports are written as JSON.  Non-finite floats are written to JSON as the
strings ``"inf"``, ``"-inf"``, and ``"nan"``.

----

.. include common links, assuming primary doc root is up one directory
.. include:: ../include/links.rst
"""
import sys
import os
import json

import numpy
from astropy.table import Table

# For versioning
import scipy
import astropy
import networkx
from .. import __version__
from ..models.observables import ThermoPoint


def _check_overwrite(ofile, overwrite):
    if os.path.isfile(ofile) and not overwrite:
        raise FileExistsError(f'File already exists: {ofile}.\nTo overwrite, set overwrite=True.')


def provenance(cfg):
    """
    Provenance record for an output file.

    Args:
        cfg (:class:`~ising_cavity.data.config.ExperimentConfig`):
            Experiment configuration.

    Returns:
        :obj:`dict`: Versions, seed, and configuration hash.
    """
    return {'ising_cavity': __version__,
            'python': '.'.join([str(v) for v in sys.version_info[:3]]),
            'numpy': numpy.__version__,
            'scipy': scipy.__version__,
            'astropy': astropy.__version__,
            'networkx': networkx.__version__,
            'seed': cfg.seed,
            'config_hash': cfg.config_hash()}


def jsonify(obj):
    """
    Convert an object to types the json module can write.

    numpy scalars and arrays become Python numbers and lists, tuples become
    lists, and non-finite floats become strings.
    """
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if isinstance(obj, numpy.ndarray):
        return jsonify(obj.tolist())
    if isinstance(obj, (bool, numpy.bool_)):
        return bool(obj)
    if isinstance(obj, (int, numpy.integer)):
        return int(obj)
    if isinstance(obj, (float, numpy.floating)):
        if numpy.isnan(obj):
            return 'nan'
        if numpy.isinf(obj):
            return 'inf' if obj > 0 else '-inf'
        return float(obj)
    return obj


def write_json(data, ofile, overwrite=False):
    """
    Write a dictionary to a JSON file.

    Args:
        data (:obj:`dict`):
            Data to write; passed through :func:`jsonify`.
        ofile (:obj:`str`):
            Output file name.
        overwrite (:obj:`bool`, optional):
            Overwrite an existing file.
    """
    _check_overwrite(ofile, overwrite)
    with open(ofile, 'w') as f:
        json.dump(jsonify(data), f, indent=2, allow_nan=False)
        f.write('\n')


def thermo_table(points, meta=None):
    """
    Construct the table of a sweep.

    Args:
        points (:obj:`list`):
            :class:`~ising_cavity.models.observables.ThermoPoint` objects.
        meta (:obj:`dict`, optional):
            Written as header comments, one ``key: value`` per line.

    Returns:
        `astropy.table.Table`_: One row per point, with the columns of
        :attr:`~ising_cavity.models.observables.ThermoPoint.columns`.
    """
    rows = [p.row() for p in points]
    # Seeds are unsigned 64-bit integers; a string column keeps them exact
    dtype = [float, float, float, float, float, float, str, float, str, str]
    tbl = Table(rows=rows if len(rows) > 0 else None, names=ThermoPoint.columns, dtype=dtype)
    tbl.meta['comments'] = [] if meta is None else [f'{k}: {v}' for k, v in meta.items()]
    return tbl


def write_thermo_csv(points, ofile, meta=None, overwrite=False):
    """
    Write a sweep to a comma-separated file.

    Floats are written with 17 significant digits, so the file reproduces
    the computed values exactly.

    Args:
        points (:obj:`list`):
            :class:`~ising_cavity.models.observables.ThermoPoint` objects.
        ofile (:obj:`str`):
            Output file name.
        meta (:obj:`dict`, optional):
            Provenance written as ``#`` comments before the header.
        overwrite (:obj:`bool`, optional):
            Overwrite an existing file.
    """
    _check_overwrite(ofile, overwrite)
    tbl = thermo_table(points, meta=meta)
    fmt = lambda x: format(float(x), '.17g')
    formats = {c: fmt for c in tbl.colnames if tbl[c].dtype.kind == 'f'}
    tbl.write(ofile, format='ascii.csv', formats=formats, comment='# ', overwrite=True)


def read_thermo_csv(ifile):
    """
    Read a sweep written by :func:`write_thermo_csv`.

    Returns:
        `astropy.table.Table`_: The table; the header comments are in
        ``meta['comments']``.
    """
    if not os.path.isfile(ifile):
        raise FileNotFoundError(f'{ifile} does not exist!')
    return Table.read(ifile, format='ascii.csv', comment='#')
