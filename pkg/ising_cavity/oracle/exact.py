r"""
Exact references for small instances.

Three independent exact computations are provided:

    - :func:`enumerate_gibbs` sums the Boltzmann-Gibbs measure

      .. math::

          \mu(\sigma) \propto \exp\Big\{\beta\sum_{(i,j)\in E}\sigma_i\sigma_j
              + \sum_i B_i\sigma_i\Big\}

      over all :math:`2^n` spin configurations of a graph.
    - :func:`prune_tree` computes the effective field at each vertex of a
      tree by a single leaf-to-root pass, :math:`h(v) = B_v + \sum_{w}
      \xi(h(w))` over the children :math:`w` of :math:`v`.
    - :func:`path_correlation` evaluates the truncated correlation between
      the root and any vertex of a tree as a product over the path,

      .. math::

          \langle\sigma_{v_0}\sigma_{v_\ell}\rangle -
          \langle\sigma_{v_0}\rangle\langle\sigma_{v_\ell}\rangle =
          (1-\langle\sigma_{v_0}\rangle^2) \prod_{i=1}^{\ell}
          \frac{\sinh 2\beta}{\cosh 2\beta + \cosh 2h_{v_i}}.

.. include:: ../include/links.rst
"""
import numpy
from scipy import optimize, special

from ..models.cavity import IsingParams, xi
from ..models.util import edge_factor


class EnumerationTooLarge(ValueError):
    """
    Raised when a graph is too large to enumerate.
    """
    pass


class ExactGibbs:
    """
    Exact Gibbs averages of a graph.

    Args:
        magnetization (`numpy.ndarray`_):
            :math:`\\langle\\sigma_i\\rangle` for each vertex.
        log_partition (:obj:`float`):
            Logarithm of the partition function.
        correlations (`numpy.ndarray`_, optional):
            :math:`\\langle\\sigma_i\\sigma_j\\rangle` for each pair.
    """
    def __init__(self, magnetization, log_partition, correlations=None):
        self.magnetization = numpy.asarray(magnetization, dtype=float)
        self.log_partition = float(log_partition)
        self.correlations = None if correlations is None \
                                else numpy.asarray(correlations, dtype=float)

    @property
    def n(self):
        return self.magnetization.size

    @property
    def mean_magnetization(self):
        r"""Spatial mean, :math:`M_n = n^{-1}\sum_i\langle\sigma_i\rangle`."""
        return float(numpy.mean(self.magnetization))

    def truncated_correlations(self):
        r"""
        Return :math:`\langle\sigma_i\sigma_j\rangle -
        \langle\sigma_i\rangle\langle\sigma_j\rangle`.
        """
        if self.correlations is None:
            raise ValueError('Correlations were not computed; enumerate with '
                             'correlations=True.')
        return self.correlations - numpy.outer(self.magnetization, self.magnetization)

    def susceptibility(self):
        r"""
        Return :math:`\chi_n = n^{-1}\sum_{i,j}(\langle\sigma_i\sigma_j\rangle
        - \langle\sigma_i\rangle\langle\sigma_j\rangle)`.
        """
        return float(numpy.sum(self.truncated_correlations())/self.n)


def _spin_block(start, end, n):
    """
    Spin configurations ``start..end-1``; bit ``i`` of the index sets
    :math:`\\sigma_i`.
    """
    c = numpy.arange(start, end, dtype=numpy.int64)
    return 2*((c[:,None] >> numpy.arange(n)) & 1).astype(float) - 1


def enumerate_gibbs(g, beta, B, correlations=False, max_n=24, block_size=2**16):
    """
    Exact Gibbs averages by enumeration of all spin configurations.

    The partition function is accumulated over blocks of configurations with
    log-sum-exp stabilization; a second pass accumulates the averages.

    Args:
        g (:class:`~ising_cavity.data.graph.GraphInstance`, :class:`~ising_cavity.data.graph.TreeInstance`):
            Graph or tree.
        beta (:obj:`float`):
            Inverse temperature.
        B (:obj:`float`, array-like):
            Field, common or per vertex.
        correlations (:obj:`bool`, optional):
            Also compute the pair correlations.
        max_n (:obj:`int`, optional):
            Largest graph accepted.
        block_size (:obj:`int`, optional):
            Configurations per block.

    Returns:
        :class:`ExactGibbs`: The exact averages.

    Raises:
        EnumerationTooLarge:
            Raised if the graph has more than ``max_n`` vertices.
    """
    _g = g.to_graph() if hasattr(g, 'to_graph') else g
    n = _g.n
    if n > max_n:
        raise EnumerationTooLarge(f'Cannot enumerate {n} spins; the limit is {max_n}.')
    _B = numpy.broadcast_to(numpy.asarray(B, dtype=float), (n,))
    u, v = _g.edges[:,0], _g.edges[:,1]
    edges = numpy.arange(0, 2**n, block_size).tolist() + [2**n]

    def _log_weight(s):
        return beta*numpy.sum(s[:,u]*s[:,v], axis=1) + s @ _B

    log_z = special.logsumexp([special.logsumexp(_log_weight(_spin_block(s, e, n)))
                               for s, e in zip(edges[:-1], edges[1:])])
    mag = numpy.zeros(n, dtype=float)
    corr = numpy.zeros((n,n), dtype=float) if correlations else None
    for start, end in zip(edges[:-1], edges[1:]):
        s = _spin_block(start, end, n)
        w = numpy.exp(_log_weight(s) - log_z)
        mag += w @ s
        if correlations:
            corr += (s*w[:,None]).T @ s
    return ExactGibbs(mag, log_z, correlations=corr)


def prune_tree(t, beta, B, boundary='free', xi_func=None):
    """
    Effective fields of a tree by leaf-to-root pruning.

    Args:
        t (:class:`~ising_cavity.data.graph.TreeInstance`):
            Tree.
        beta (:obj:`float`):
            Inverse temperature.
        B (:obj:`float`, array-like):
            Field, common or per vertex.
        boundary (:obj:`str`, optional):
            ``'free'`` leaves have :math:`h=B`; ``'plus'`` leaves (other than
            the root) are fixed to :math:`+1`, i.e., :math:`h=\\infty`.
        xi_func (callable, optional):
            Replacement for :func:`~ising_cavity.models.cavity.xi`, called as
            ``xi_func(params, h)``.

    Returns:
        :obj:`tuple`: The effective field at each vertex, from its subtree
        only, and the root magnetization :math:`\\tanh h(\\rm root)`.
    """
    if boundary not in ['free', 'plus']:
        raise ValueError(f'Unknown boundary "{boundary}"; use free or plus.')
    _B = numpy.broadcast_to(numpy.asarray(B, dtype=float), (t.n,))
    params = IsingParams(beta)
    _xi = xi if xi_func is None else xi_func
    h = numpy.zeros(t.n, dtype=float)
    for v in t.order[::-1]:
        c = t.children[v]
        if len(c) == 0 and boundary == 'plus' and v != t.root:
            h[v] = numpy.inf
            continue
        h[v] = _B[v] + (numpy.sum(_xi(params, h[c])) if len(c) > 0 else 0.)
    return h, float(numpy.tanh(h[t.root]))


def path_correlation(t, beta, B, target, source=None):
    """
    Exact truncated correlation between two vertices of a tree.

    Args:
        t (:class:`~ising_cavity.data.graph.TreeInstance`):
            Tree.
        beta (:obj:`float`):
            Inverse temperature.
        B (:obj:`float`, array-like):
            Field, common or per vertex.
        target (:obj:`int`):
            End vertex of the path.
        source (:obj:`int`, optional):
            Start vertex of the path; the root if None.  Otherwise, the
            target must be a descendant of the source.

    Returns:
        :obj:`float`: :math:`\\langle\\sigma_s\\sigma_t\\rangle -
        \\langle\\sigma_s\\rangle\\langle\\sigma_t\\rangle`.

    Raises:
        ValueError:
            Raised if the target is not a descendant of the source.
    """
    if not 0 <= target < t.n:
        raise ValueError(f'{target} is not a vertex of the tree.')
    _t = t
    if source is not None and source != t.root:
        if not t.is_ancestor(source, target):
            raise ValueError(f'Vertex {target} is not a descendant of {source}.')
        # Root the tree at the source so its field includes the rest of the tree
        _t = t.reroot(source)
    h, m = prune_tree(_t, beta, B)
    path = _t.path(target)
    return float((1 - m**2)*numpy.prod(edge_factor(beta, h[path[1:]])))


def regular_tree_field(d, params, branch='plus'):
    r"""
    Fixed point of the cavity recursion on the infinite regular tree,
    :math:`h^* = B + (d-1)\xi(h^*)`.

    For :math:`B>0` the fixed point is unique.  At :math:`B=0` and below the
    critical temperature the recursion also has the root :math:`h^*=0`,
    selected by ``branch='free'``.

    Args:
        d (:obj:`int`):
            Vertex degree.
        params (:class:`~ising_cavity.models.cavity.IsingParams`):
            Model parameters.
        branch (:obj:`str`, optional):
            ``'plus'`` (largest root) or ``'free'`` (smallest nonnegative
            root); only relevant for :math:`B=0`.

    Returns:
        :obj:`float`: The fixed point :math:`h^*`.
    """
    if branch not in ['free', 'plus']:
        raise ValueError(f'Unknown branch "{branch}"; use free or plus.')
    k = d - 1
    B = params.B
    g = lambda h: B + k*xi(params, h) - h
    if B > 0:
        hi = B + k*params.beta
        return float(B if g(B) <= 0 else optimize.brentq(g, B, hi, xtol=1e-15, rtol=1e-15))
    if branch == 'free' or k*params.beta_hat <= 1:
        return 0.
    lo = 1e-12
    return float(optimize.brentq(g, lo, k*params.beta, xtol=1e-15, rtol=1e-15))
