
import warnings

import numpy
import pytest

from ising_cavity.models.degree import Poisson
from ising_cavity.models.cavity import IsingParams, SolverConfig, fixed_point, xi
from ising_cavity.models.observables import magnetization
from ising_cavity.data.graph import GraphInstance, TreeInstance, sample_configuration_model
from ising_cavity.oracle.exact import EnumerationTooLarge, enumerate_gibbs, prune_tree
from ising_cavity.oracle.exact import path_correlation, regular_tree_field
from ising_cavity.oracle.glauber import integrated_autocorr_time, color_classes
from ising_cavity.oracle.glauber import glauber_estimate
from ising_cavity.oracle.suite import OracleConfig, run_suite, report_suite
from ising_cavity.util.parallel import RandomStream

from .util import requires_long


def _cycle(n):
    return GraphInstance(n, [[i, (i+1) % n] for i in range(n)])


def _tree():
    #      0
    #    / | \
    #   1  2  3
    #  / \     \
    # 4   5     6
    #           |
    #           7
    return TreeInstance([[1, 2, 3], [4, 5], [], [6], [], [], [7], []])


def test_single_edge():
    beta, B = 0.7, 0.3
    exact = enumerate_gibbs(GraphInstance(2, [[0, 1]]), beta, B, correlations=True)
    M = numpy.exp(beta)*numpy.sinh(2*B)/(numpy.exp(beta)*numpy.cosh(2*B) + numpy.exp(-beta))
    assert numpy.allclose(exact.magnetization, M, rtol=1e-12)
    assert numpy.isclose(exact.mean_magnetization, M, rtol=1e-12)
    log_z = numpy.log(2*numpy.exp(beta)*numpy.cosh(2*B) + 2*numpy.exp(-beta))
    assert numpy.isclose(exact.log_partition, log_z, rtol=1e-12)


def test_enumeration_limits():
    with pytest.raises(EnumerationTooLarge):
        enumerate_gibbs(_cycle(25), 0.1, 0.1)
    exact = enumerate_gibbs(_cycle(4), 0.1, 0.1)
    with pytest.raises(ValueError):
        exact.susceptibility()


def test_enumeration_blocks():
    g = _cycle(8)
    a = enumerate_gibbs(g, 0.4, 0.2, correlations=True)
    b = enumerate_gibbs(g, 0.4, 0.2, correlations=True, block_size=7)
    assert numpy.allclose(a.magnetization, b.magnetization, rtol=1e-12)
    assert numpy.isclose(a.susceptibility(), b.susceptibility(), rtol=1e-10)
    assert numpy.allclose(a.magnetization, a.magnetization[0]), 'Cycle is vertex transitive'


def test_independent_spins():
    exact = enumerate_gibbs(_cycle(5), 0., 0.4, correlations=True)
    assert numpy.allclose(exact.magnetization, numpy.tanh(0.4), rtol=1e-12)
    assert numpy.isclose(exact.susceptibility(), 1 - numpy.tanh(0.4)**2, rtol=1e-10)


def test_pruning():
    t = _tree()
    for beta, B in [(0.3, 0.1), (1.2, 0.05)]:
        exact = enumerate_gibbs(t, beta, B)
        h, m = prune_tree(t, beta, B)
        assert abs(m - exact.magnetization[t.root]) < 1e-12, \
                f'Pruning disagrees with enumeration at beta={beta}'
        assert h[7] == B
        _, m_plus = prune_tree(t, beta, B, boundary='plus')
        assert m_plus >= m
    with pytest.raises(ValueError):
        prune_tree(t, 0.3, 0.1, boundary='minus')


def test_path_correlation():
    t = _tree()
    beta, B = 0.6, 0.2
    corr = enumerate_gibbs(t, beta, B, correlations=True).truncated_correlations()
    for v in range(t.n):
        assert abs(path_correlation(t, beta, B, v) - corr[0, v]) < 1e-12, \
                f'Path correlation to {v} disagrees with enumeration'
    assert abs(path_correlation(t, beta, B, 7, source=3) - corr[3, 7]) < 1e-12
    assert abs(path_correlation(t, beta, B, 5, source=1) - corr[1, 5]) < 1e-12
    with pytest.raises(ValueError):
        path_correlation(t, beta, B, 7, source=1)


def test_regular_tree_field():
    params = IsingParams(0.3, 0.1)
    h = regular_tree_field(3, params)
    assert abs(h - params.B - 2*xi(params, h)) < 1e-12
    params = IsingParams(0.8)
    assert regular_tree_field(3, params, branch='free') == 0.
    h = regular_tree_field(3, params)
    assert h > 0 and abs(h - 2*xi(params, h)) < 1e-12
    assert regular_tree_field(3, IsingParams(0.3)) == 0., 'No spontaneous field above beta_c'


def test_autocorr_time():
    gen = RandomStream(1).generator()
    assert abs(integrated_autocorr_time(gen.normal(size=10000)) - 0.5) < 0.1
    assert integrated_autocorr_time(numpy.ones(100)) == 0.5
    # AR(1) with coefficient a has tau = (1+a)/(2(1-a))
    a = 0.8
    x = numpy.zeros(100000)
    e = gen.normal(size=x.size)
    for i in range(1, x.size):
        x[i] = a*x[i-1] + e[i]
    assert abs(integrated_autocorr_time(x) - 4.5) < 0.5


def test_color_classes():
    g = _cycle(6)
    classes = color_classes(g)
    assert sum(c.size for c in classes) == 6
    for c in classes:
        assert not numpy.any(numpy.isin(g.edges[:,0], c) & numpy.isin(g.edges[:,1], c)), \
                'Vertices of one color must not be adjacent'


def test_glauber_cycle():
    g = _cycle(6)
    beta, B = 0.3, 0.2
    exact = enumerate_gibbs(g, beta, B, correlations=True)
    est = glauber_estimate(g, beta, B, RandomStream(3), sweeps=20000, burn_in=100, replicas=2)
    assert est.series.shape == (2, 20000)
    assert abs(est.M - exact.mean_magnetization) < 0.02
    assert abs(est.chi - exact.susceptibility()) < 0.15*exact.susceptibility()
    assert est.to_dict()['replicas'] == 2
    with pytest.raises(ValueError):
        glauber_estimate(g, beta, 0., RandomStream(3))


def test_oracle_config():
    cfg = OracleConfig()
    assert OracleConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()
    with pytest.raises(ValueError):
        OracleConfig.from_dict({'n_tree': 10})
    with pytest.raises(ValueError):
        OracleConfig(graphs=[{'n': 3}])


def _small_suite(**kwargs):
    par = {'n_trees': 20, 'max_tree_size': 10, 'n_graphs': 4, 'max_graph_size': 8}
    par.update(kwargs)
    return OracleConfig(**par)


def test_suite_passes(capsys):
    results = run_suite(_small_suite(), RandomStream(12))
    for name, r in results.items():
        assert r['passed'], f'{name} failed: {r["failures"]}'
    assert results['pruning_vs_enumeration']['n_instances'] == 20
    assert results['susceptibility_derivative']['n_instances'] == 4
    report_suite(results)
    assert 'PASS' in capsys.readouterr().out


def test_suite_catches_bad_recursion():
    results = run_suite(_small_suite(n_graphs=0), RandomStream(12),
                        xi_func=lambda p, h: -xi(p, h))
    r = results['pruning_vs_enumeration']
    assert not r['passed'], 'Suite should catch a corrupted edge map'
    assert 'tree' in r['failures'][0]['instance']
    assert results['path_formula_vs_enumeration']['passed']


def test_suite_rejects_large_graph():
    big = {'n': 25, 'edges': [[i, i+1] for i in range(24)], 'beta': 0.2, 'B': 0.1}
    results = run_suite(_small_suite(n_trees=0, n_graphs=0, graphs=[big]), RandomStream(1))
    r = results['susceptibility_derivative']
    assert not r['passed']
    assert r['failures'][0]['error'] is None
    assert 'limit' in r['failures'][0]['message']


@requires_long
def test_glauber_vs_cavity():
    model = Poisson(3.)
    params = IsingParams(0.2, 0.1)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', UserWarning)
        g = sample_configuration_model(model, 10000, RandomStream(30))
    est = glauber_estimate(g, params.beta, params.B, RandomStream(31), sweeps=2000,
                           burn_in=200, replicas=4, workers=4)
    pop = fixed_point(model, params, SolverConfig(), rng=RandomStream(32))
    M, _ = magnetization(model, pop, 1000000, RandomStream(33))
    assert abs(est.M - M) < 0.01, 'Glauber and cavity magnetizations disagree'
