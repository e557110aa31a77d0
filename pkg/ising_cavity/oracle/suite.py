"""
Equivalence checks between the exact oracles.

The suite draws a corpus of small Galton-Watson trees and configuration-model
graphs and checks that

    - the root magnetization from tree pruning matches enumeration,
    - the path-product formula for the truncated correlation matches
      enumeration,
    - the free-boundary root magnetization never exceeds the plus-boundary
      one, and
    - the enumerated susceptibility matches the finite-difference derivative
      of the total magnetization with respect to the vertex fields.

.. include:: ../include/links.rst
"""
import warnings

import numpy
from tqdm import tqdm

from ..data.graph import GraphInstance, SizeCapExceeded, sample_configuration_model
from ..data.graph import sample_galton_watson
from ..models.degree import make_model
from .exact import EnumerationTooLarge, enumerate_gibbs, path_correlation, prune_tree


class OracleConfig:
    """
    Corpus sizes and tolerances of the oracle suite.

    Args:
        n_trees (:obj:`int`, optional):
            Number of random trees.
        max_tree_size (:obj:`int`, optional):
            Largest tree accepted in the corpus.
        max_depth (:obj:`int`, optional):
            Largest tree depth drawn.
        tree_model (:obj:`dict`, optional):
            Degree model for the trees; Poisson(2) by default.
        n_graphs (:obj:`int`, optional):
            Number of random graphs.
        max_graph_size (:obj:`int`, optional):
            Largest random graph.
        graph_model (:obj:`dict`, optional):
            Degree model for the graphs; Poisson(3) by default.
        tolerance (:obj:`float`, optional):
            Absolute tolerance of the pruning and path checks.
        fd_step (:obj:`float`, optional):
            Central finite-difference step.
        fd_tolerance (:obj:`float`, optional):
            Relative tolerance of the derivative check.
        graphs (:obj:`list`, optional):
            Additional graphs, each a dictionary with ``n`` and ``edges``
            and, optionally, ``beta`` and ``B``.
    """
    def __init__(self, n_trees=100, max_tree_size=14, max_depth=4, tree_model=None,
                 n_graphs=20, max_graph_size=16, graph_model=None, tolerance=1e-10,
                 fd_step=1e-5, fd_tolerance=1e-6, graphs=None):
        if n_trees < 0 or n_graphs < 0:
            raise ValueError('Corpus sizes must be nonnegative.')
        if max_tree_size < 1 or max_graph_size < 2 or max_depth < 1:
            raise ValueError('Tree and graph sizes must be positive.')
        for name, value in zip(['tolerance', 'fd_step', 'fd_tolerance'],
                               [tolerance, fd_step, fd_tolerance]):
            if not value > 0:
                raise ValueError(f'{name} must be positive.')
        self.n_trees = int(n_trees)
        self.max_tree_size = int(max_tree_size)
        self.max_depth = int(max_depth)
        self.tree_model = {'kind': 'poisson', 'lam': 2.} if tree_model is None else tree_model
        self.n_graphs = int(n_graphs)
        self.max_graph_size = int(max_graph_size)
        self.graph_model = {'kind': 'poisson', 'lam': 3.} if graph_model is None \
                                else graph_model
        self.tolerance = float(tolerance)
        self.fd_step = float(fd_step)
        self.fd_tolerance = float(fd_tolerance)
        self.graphs = [] if graphs is None else list(graphs)
        for g in self.graphs:
            if not isinstance(g, dict) or 'n' not in g or 'edges' not in g:
                raise ValueError('Additional graphs must be dictionaries with n and edges.')

    @classmethod
    def from_dict(cls, d):
        """
        Construct the configuration from a dictionary, rejecting unknown
        keys.
        """
        known = cls().to_dict().keys()
        unknown = [k for k in d.keys() if k not in known]
        if len(unknown) > 0:
            raise ValueError(f'Unknown oracle parameters: {", ".join(unknown)}')
        return cls(**d)

    def to_dict(self):
        return {'n_trees': self.n_trees, 'max_tree_size': self.max_tree_size,
                'max_depth': self.max_depth, 'tree_model': self.tree_model,
                'n_graphs': self.n_graphs, 'max_graph_size': self.max_graph_size,
                'graph_model': self.graph_model, 'tolerance': self.tolerance,
                'fd_step': self.fd_step, 'fd_tolerance': self.fd_tolerance,
                'graphs': self.graphs}


class CheckResult:
    """
    Outcome of one check over the corpus.
    """
    def __init__(self, name, tolerance):
        self.name = name
        self.tolerance = tolerance
        self.n_instances = 0
        self.max_error = 0.
        self.failures = []

    @property
    def passed(self):
        return len(self.failures) == 0

    def add(self, error, instance, **kwargs):
        """
        Record one comparison; it fails if the error is not within tolerance.
        """
        self.n_instances += 1
        if numpy.isfinite(error):
            self.max_error = max(self.max_error, float(error))
        if not error <= self.tolerance:
            self.failures += [{'error': float(error), 'instance': instance, **kwargs}]

    def reject(self, instance, message):
        """
        Record an instance that could not be checked.
        """
        self.n_instances += 1
        self.failures += [{'error': None, 'instance': instance, 'message': message}]

    def to_dict(self):
        return {'passed': self.passed, 'n_instances': self.n_instances,
                'max_error': self.max_error, 'tolerance': self.tolerance,
                'failures': self.failures}


def random_tree_corpus(cfg, rng):
    """
    Draw the random trees, with their inverse temperature and field.

    Tree ``i`` is drawn from ``rng.child(0, i, attempt)``, redrawing until
    the tree fits within ``cfg.max_tree_size``; its parameters come from
    ``rng.child(1, i)``.

    Returns:
        :obj:`list`: Tuples with the tree, :math:`\\beta\\in[0,1]`, and
        :math:`B\\in[0.01,1]`.
    """
    model = make_model(cfg.tree_model)
    fm = model.forward()
    corpus = []
    for i in range(cfg.n_trees):
        attempt = 0
        while True:
            stream = rng.child(0, i, attempt)
            depth = int(stream.child(0).generator().integers(1, cfg.max_depth+1))
            try:
                t = sample_galton_watson(model, fm, depth, stream.child(1),
                                         size_cap=cfg.max_tree_size)
            except SizeCapExceeded:
                attempt += 1
                continue
            break
        gen = rng.child(1, i).generator()
        corpus += [(t, float(gen.uniform(0, 1)), float(gen.uniform(0.01, 1)))]
    return corpus


def random_graph_corpus(cfg, rng):
    """
    Draw the random graphs and append the configured extra graphs.

    Returns:
        :obj:`list`: Tuples with the graph, :math:`\\beta`, and :math:`B`.
    """
    model = make_model(cfg.graph_model)
    corpus = []
    for i in range(cfg.n_graphs):
        gen = rng.child(2, i).generator()
        n = int(gen.integers(2, cfg.max_graph_size+1))
        with warnings.catch_warnings():
            # Small graphs routinely lose edges to the erasure
            warnings.simplefilter('ignore', UserWarning)
            g = sample_configuration_model(model, n, rng.child(3, i))
        corpus += [(g, float(gen.uniform(0, 1)), float(gen.uniform(0.01, 1)))]
    for i, d in enumerate(cfg.graphs):
        gen = rng.child(4, i).generator()
        beta = float(d['beta']) if 'beta' in d else float(gen.uniform(0, 1))
        B = float(d['B']) if 'B' in d else float(gen.uniform(0.01, 1))
        corpus += [(GraphInstance(d['n'], d['edges']), beta, B)]
    return corpus


def finite_difference_susceptibility(g, beta, B, step):
    r"""
    Susceptibility from the derivative identity,
    :math:`\chi_n = n^{-1}\sum_{i,j}\partial\langle\sigma_i\rangle/\partial
    B_j`, by central differences in each vertex field.
    """
    _B = numpy.full(g.n, B, dtype=float)
    total = 0.
    for j in range(g.n):
        up = _B.copy()
        up[j] += step
        dn = _B.copy()
        dn[j] -= step
        total += (numpy.sum(enumerate_gibbs(g, beta, up).magnetization)
                  - numpy.sum(enumerate_gibbs(g, beta, dn).magnetization))/(2*step)
    return total/g.n


def run_suite(cfg, rng, xi_func=None, verbose=False):
    """
    Run all oracle checks.

    Args:
        cfg (:class:`OracleConfig`):
            Suite configuration.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream for the corpus.
        xi_func (callable, optional):
            Replacement edge map passed to
            :func:`~ising_cavity.oracle.exact.prune_tree`; used to check that
            the suite catches a corrupted recursion.
        verbose (:obj:`bool`, optional):
            Show progress bars.

    Returns:
        :obj:`dict`: The results of each check (see :class:`CheckResult`)
        keyed by name.
    """
    checks = {'pruning_vs_enumeration': CheckResult('pruning_vs_enumeration', cfg.tolerance),
              'path_formula_vs_enumeration': CheckResult('path_formula_vs_enumeration',
                                                         cfg.tolerance),
              'gks_sandwich': CheckResult('gks_sandwich', 1e-14),
              'susceptibility_derivative': CheckResult('susceptibility_derivative',
                                                       cfg.fd_tolerance)}

    for t, beta, B in tqdm(random_tree_corpus(cfg, rng), disable=not verbose, desc='Trees'):
        instance = {'tree': t.to_dict(), 'beta': beta, 'B': B}
        exact = enumerate_gibbs(t, beta, B, correlations=True)
        _, m_free = prune_tree(t, beta, B, boundary='free', xi_func=xi_func)
        _, m_plus = prune_tree(t, beta, B, boundary='plus', xi_func=xi_func)
        checks['pruning_vs_enumeration'].add(abs(m_free - exact.magnetization[t.root]),
                                             instance)
        checks['gks_sandwich'].add(max(m_free - m_plus, 0.), instance,
                                   free=m_free, plus=m_plus)
        corr = exact.truncated_correlations()[t.root]
        err = max(abs(path_correlation(t, beta, B, v) - corr[v]) for v in range(t.n))
        checks['path_formula_vs_enumeration'].add(err, instance)

    for g, beta, B in tqdm(random_graph_corpus(cfg, rng), disable=not verbose, desc='Graphs'):
        instance = {'graph': g.to_dict(), 'beta': beta, 'B': B}
        try:
            chi = enumerate_gibbs(g, beta, B, correlations=True).susceptibility()
        except EnumerationTooLarge as e:
            checks['susceptibility_derivative'].reject(instance, str(e))
            continue
        fd = finite_difference_susceptibility(g, beta, B, cfg.fd_step)
        checks['susceptibility_derivative'].add(abs(fd - chi)/abs(chi), instance,
                                                chi=chi, finite_difference=fd)
    return {k: v.to_dict() for k, v in checks.items()}


def report_suite(results):
    """
    Print the status of each check.
    """
    print('-'*70)
    print(f'{"Oracle checks":^70}')
    print('-'*70)
    print(f'{"Check":<30} {"Status":>6} {"N":>6} {"Max error":>12} {"Tolerance":>12}')
    for name, r in results.items():
        print(f'{name:<30} {"PASS" if r["passed"] else "FAIL":>6} {r["n_instances"]:>6} '
              f'{r["max_error"]:>12.3e} {r["tolerance"]:>12.3e}')
        for f in r['failures']:
            if f.get('message') is not None:
                print(f'    rejected: {f["message"]}')
    print('-'*70)
