r"""
Heat-bath Glauber dynamics for the Ising model on a finite graph.

Each sweep updates every spin once from its conditional law,

.. math::

    P(\sigma_i=+1\,|\,\sigma_{-i}) = \frac{1}{1+\exp\{-2(\beta\sum_{j\sim
    i}\sigma_j + B)\}}.

Vertices are grouped into independent sets by a greedy graph coloring
(`networkx.greedy_color`_); all spins of one color are updated at once,
which is equivalent to a systematic scan.  The spatial mean :math:`m_t` is
recorded after each sweep; :math:`M_n` is its time average and
:math:`\chi_n = n(\langle m^2\rangle - \langle m\rangle^2)`.

.. include:: ../include/links.rst
"""
import warnings
from multiprocessing.pool import ThreadPool

import numpy
from scipy import special
from astropy.stats import jackknife_stats
import networkx as nx


def integrated_autocorr_time(x, c=5.):
    r"""
    Integrated autocorrelation time of a series,
    :math:`\tau = 1/2 + \sum_{t=1}^{W}\rho(t)`, with the window :math:`W`
    chosen as the smallest lag with :math:`W\geq c\,\tau(W)`.

    Args:
        x (`numpy.ndarray`_):
            Time series.
        c (:obj:`float`, optional):
            Window constant.

    Returns:
        :obj:`float`: :math:`\tau`; 0.5 for a constant or uncorrelated
        series.
    """
    _x = numpy.asarray(x, dtype=float) - numpy.mean(x)
    n = _x.size
    if n < 2 or numpy.all(_x == 0):
        return 0.5
    nfft = 2**int(numpy.ceil(numpy.log2(2*n)))
    f = numpy.fft.rfft(_x, n=nfft)
    acf = numpy.fft.irfft(f*numpy.conjugate(f), n=nfft)[:n]
    acf /= acf[0]
    tau = 0.5 + numpy.cumsum(acf[1:])
    window = numpy.arange(1, n) >= c*tau
    return float(tau[numpy.argmax(window)] if numpy.any(window) else tau[-1])


class GlauberEstimate:
    """
    Magnetization and susceptibility estimated by Glauber dynamics.

    Args:
        M, M_se (:obj:`float`):
            Mean magnetization per vertex and its standard error.
        chi, chi_se (:obj:`float`):
            Fluctuation susceptibility and its standard error.
        tau_int (:obj:`float`):
            Integrated autocorrelation time of :math:`m_t`, in sweeps.
        sweeps (:obj:`int`):
            Measurement sweeps per replica.
        replicas (:obj:`int`):
            Number of independent chains.
        series (`numpy.ndarray`_):
            The recorded spatial means, shape ``(replicas, sweeps)``.
    """
    def __init__(self, M, M_se, chi, chi_se, tau_int, sweeps, replicas, series):
        self.M = float(M)
        self.M_se = float(M_se)
        self.chi = float(chi)
        self.chi_se = float(chi_se)
        self.tau_int = float(tau_int)
        self.sweeps = int(sweeps)
        self.replicas = int(replicas)
        self.series = series

    def to_dict(self):
        return {'M': self.M, 'M_se': self.M_se, 'chi': self.chi, 'chi_se': self.chi_se,
                'tau_int': self.tau_int, 'sweeps': self.sweeps, 'replicas': self.replicas}


def color_classes(g):
    """
    Partition the vertices of a graph into independent sets.

    Args:
        g (:class:`~ising_cavity.data.graph.GraphInstance`):
            Graph.

    Returns:
        :obj:`list`: Sorted vertex arrays, one per color.
    """
    colors = nx.greedy_color(g.to_networkx(), strategy='largest_first')
    c = numpy.array([colors[v] for v in range(g.n)])
    return [numpy.where(c == k)[0] for k in numpy.unique(c)]


def _run_chain(adj, classes, beta, B, burn_in, sweeps, gen):
    n = adj.shape[0]
    s = numpy.ones(n, dtype=float)
    rows = [adj[c] for c in classes]
    m = numpy.empty(sweeps, dtype=float)
    for t in range(burn_in + sweeps):
        for c, a in zip(classes, rows):
            p = special.expit(2*(beta*(a @ s) + B))
            s[c] = numpy.where(gen.random(c.size) < p, 1., -1.)
        if t >= burn_in:
            m[t-burn_in] = numpy.mean(s)
    return m


def glauber_estimate(g, beta, B, rng, sweeps=10000, burn_in=1000, replicas=1, nblocks=50,
                     workers=1):
    r"""
    Estimate :math:`M_n(\beta,B)` and :math:`\chi_n(\beta,B)` on a graph by
    heat-bath Glauber dynamics.

    Chains start from all spins :math:`+1`.  The standard error of
    :math:`M_n` uses the integrated autocorrelation time; the error of
    :math:`\chi_n` is a block jackknife over ``nblocks`` contiguous blocks of
    each chain.  The fluctuation estimator equals the susceptibility of the
    finite-graph Gibbs measure for long chains.

    Args:
        g (:class:`~ising_cavity.data.graph.GraphInstance`):
            Graph.
        beta (:obj:`float`):
            Inverse temperature.
        B (:obj:`float`):
            Field; must be positive.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream; replica ``r`` uses child ``r``.
        sweeps (:obj:`int`, optional):
            Measurement sweeps per replica.
        burn_in (:obj:`int`, optional):
            Discarded sweeps per replica.
        replicas (:obj:`int`, optional):
            Number of independent chains.
        nblocks (:obj:`int`, optional):
            Jackknife blocks per replica.
        workers (:obj:`int`, optional):
            Number of threads over replicas.

    Returns:
        :class:`GlauberEstimate`: The estimates.

    Raises:
        ValueError:
            Raised if :math:`B\leq 0`, or if there are fewer measurement
            sweeps than jackknife blocks.
    """
    if not B > 0:
        raise ValueError('Glauber estimates require B > 0.')
    if sweeps < nblocks or burn_in < 0:
        raise ValueError('Need at least nblocks measurement sweeps and a nonnegative burn-in.')
    adj = g.adjacency()
    classes = color_classes(g)

    def _replica(r):
        return _run_chain(adj, classes, beta, B, burn_in, sweeps, rng.child(r).generator())

    if workers > 1 and replicas > 1:
        with ThreadPool(min(workers, replicas)) as p:
            series = numpy.array(p.map(_replica, range(replicas)))
    else:
        series = numpy.array([_replica(r) for r in range(replicas)])

    M = numpy.mean(series)
    tau = numpy.mean([integrated_autocorr_time(s) for s in series])
    if tau > sweeps/50:
        warnings.warn(f'Autocorrelation time ({tau:.1f} sweeps) exceeds 1/50 of the '
                      f'measurement window ({sweeps} sweeps).')
    M_se = numpy.sqrt(2*tau*numpy.var(series)/series.size)

    # Jackknife over blocks, passed to astropy as block indices
    blocks = numpy.concatenate([numpy.array_split(s, nblocks) for s in series])
    m1 = numpy.array([numpy.mean(b) for b in blocks])
    m2 = numpy.array([numpy.mean(b**2) for b in blocks])

    def _chi(indx):
        i = indx.astype(int)
        return g.n*(numpy.mean(m2[i]) - numpy.mean(m1[i])**2)

    chi = g.n*numpy.var(series)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', RuntimeWarning)
        _, _, chi_se, _ = jackknife_stats(numpy.arange(m1.size, dtype=float), _chi, 0.95)
    return GlauberEstimate(M, M_se, chi, chi_se, tau, sweeps, replicas, series)
