"""
Testing utilities
"""
import os
import json

import pytest

long_tests = os.environ.get('ISING_CAVITY_LONG_TESTS', '0') not in ['', '0']

requires_long = pytest.mark.skipif(not long_tests,
                                   reason='Long test; set ISING_CAVITY_LONG_TESTS=1 to run.')


def small_solver(**kwargs):
    """
    Solver parameters small enough for quick tests.
    """
    par = {'population_size': 20000, 'max_iters': 500, 'block_size': 4096}
    par.update(kwargs)
    return par


def write_config(path, cfg):
    """
    Write a configuration dictionary to a JSON file and return its name.
    """
    ofile = str(path / 'config.json')
    with open(ofile, 'w') as f:
        json.dump(cfg, f)
    return ofile
