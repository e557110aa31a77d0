r"""
Population dynamics for the cavity field of the Ising model on a random tree.

The cavity field :math:`h = h(\beta,B)` solves the distributional fixed
point

.. math::

    h \overset{d}{=} B + \sum_{i=1}^{K} \xi(h_i), \qquad
    \xi(h) = {\rm atanh}(\hat\beta \tanh h), \qquad \hat\beta = \tanh\beta,

where :math:`K` has the forward degree law and the :math:`h_i` are i.i.d.
copies of :math:`h`.  The law of :math:`h` is represented by a large sample
(a :class:`CavityPopulation`) that is iterated until its statistics settle.
The "free" start is :math:`h^{(0)}\equiv B`; the "plus" start is
:math:`h^{(0)}\equiv\infty`, represented exactly by ``numpy.inf`` because
:math:`\xi(\infty)=\beta`.

Each iteration redraws every sample as :math:`B+\sum_{i\leq K}\xi(h_{J_i})`
with the :math:`J_i` chosen uniformly (with replacement) from the previous
generation; this stands in for the i.i.d. copies, with an error that
vanishes as the population grows.

.. include:: ../include/links.rst
"""
import warnings
from collections import deque

import numpy
from scipy import stats

from ..util.parallel import RandomStream, map_blocks
from .util import jackknife_mean, logcosh


class NonConvergence(RuntimeError):
    """
    Raised when the population does not meet the convergence criterion.

    Args:
        message (:obj:`str`):
            Error message.
        population (:class:`CavityPopulation`):
            The last (unconverged) population, including its diagnostics
            trace.
    """
    def __init__(self, message, population):
        super().__init__(message)
        self.population = population


class NonUniqueFixedPoint(RuntimeError):
    """
    Raised when populations from the free and plus starts disagree.
    """
    def __init__(self, message, free, plus, ks):
        super().__init__(message)
        self.free = free
        self.plus = plus
        self.ks = ks


class IsingParams:
    r"""
    Inverse temperature and external field.

    Args:
        beta (:obj:`float`):
            Inverse temperature :math:`\beta\geq 0`.
        B (:obj:`float`, optional):
            External field :math:`B\geq 0`.

    Attributes:
        beta_hat (:obj:`float`):
            :math:`\hat\beta = \tanh\beta`.
    """
    def __init__(self, beta, B=0.):
        if not numpy.isfinite(beta) or beta < 0:
            raise ValueError(f'Inverse temperature must be finite and nonnegative; got {beta}.')
        if not numpy.isfinite(B) or B < 0:
            raise ValueError(f'External field must be finite and nonnegative; got {B}.')
        self.beta = float(beta)
        self.B = float(B)
        self.beta_hat = float(numpy.tanh(self.beta))

    @property
    def field_B(self):
        return self.B

    def __repr__(self):
        return f'IsingParams(beta={self.beta!r}, B={self.B!r})'

    def to_dict(self):
        return {'beta': self.beta, 'B': self.B}


def xi(params, h):
    r"""
    Propagate a field along one edge, :math:`\xi(h) = {\rm atanh}(\hat\beta
    \tanh h)`.

    With :math:`u = \hat\beta\tanh h`, the value is computed as
    :math:`\frac{1}{2}{\rm log1p}(2u/(1-u))` for :math:`|u|\leq 1/2` and as
    :math:`\frac{1}{2}[\log\cosh(\beta+h) - \log\cosh(\beta-h)]` otherwise;
    neither form loses precision near :math:`|u|=1`.  Infinite fields
    map to exactly :math:`\pm\beta`.

    Args:
        params (:class:`IsingParams`):
            Model parameters.
        h (:obj:`float`, `numpy.ndarray`_):
            Field(s).

    Returns:
        :obj:`float`, `numpy.ndarray`_: Propagated field(s).
    """
    _h = numpy.asarray(h, dtype=float)
    u = params.beta_hat * numpy.tanh(_h)
    out = numpy.empty(_h.shape, dtype=float)
    small = numpy.absolute(u) <= 0.5
    out[small] = 0.5*numpy.log1p(2*u[small]/(1-u[small]))
    large = numpy.logical_not(small)
    if numpy.any(large):
        saturated = numpy.isinf(_h)
        finite = large & numpy.logical_not(saturated)
        out[finite] = 0.5*(logcosh(params.beta + _h[finite]) - logcosh(params.beta - _h[finite]))
        out[saturated] = numpy.sign(_h[saturated]) * params.beta
    return out if out.ndim > 0 else float(out)


class SolverConfig:
    """
    Parameters of the population-dynamics solver.

    Args:
        population_size (:obj:`int`, optional):
            Number of samples in the population.
        max_iters (:obj:`int`, optional):
            Maximum number of iterations.
        window (:obj:`int`, optional):
            Length of the averaging window and the lag between populations
            compared by the Kolmogorov-Smirnov guard.
        tol (:obj:`float`, optional):
            Tolerance for the relative change of the window-averaged
            :math:`E[\\xi(h)]`.
        ks_tol (:obj:`float`, optional):
            Maximum Kolmogorov-Smirnov distance between the free-start and
            plus-start fixed points.
        ks_guard (:obj:`float`, optional):
            Maximum Kolmogorov-Smirnov distance between populations ``window``
            iterations apart.  Raised to the 1% critical value of the test
            for small populations.
        check_uniqueness (:obj:`bool`, optional):
            Solve from both the free and plus starts and require agreement.
        seed (:obj:`int`, optional):
            Master seed used when no random stream is passed to the solver.
        workers (:obj:`int`, optional):
            Number of threads; results do not depend on this number.
        block_size (:obj:`int`, optional):
            Number of samples per random-stream block.
        allow_infinite_mean (:obj:`bool`, optional):
            Allow iteration with :math:`\\nu=\\infty`.
        max_offspring (:obj:`int`, optional):
            Cap on the offspring count per sample, only applied when
            ``allow_infinite_mean`` is set.
    """
    def __init__(self, population_size=200000, max_iters=5000, window=10, tol=1e-4,
                 ks_tol=0.01, ks_guard=0.005, check_uniqueness=False, seed=None, workers=1,
                 block_size=16384, allow_infinite_mean=False, max_offspring=1000000):
        if int(population_size) != population_size or population_size < 2:
            raise ValueError('population_size must be an integer >= 2.')
        if int(max_iters) != max_iters or max_iters < 1:
            raise ValueError('max_iters must be a positive integer.')
        if int(window) != window or window < 1:
            raise ValueError('window must be a positive integer.')
        if int(block_size) != block_size or block_size < 1:
            raise ValueError('block_size must be a positive integer.')
        if int(workers) != workers or workers < 1:
            raise ValueError('workers must be a positive integer.')
        for name, value in zip(['tol', 'ks_tol', 'ks_guard'], [tol, ks_tol, ks_guard]):
            if not value > 0:
                raise ValueError(f'{name} must be positive.')
        if seed is not None and (int(seed) != seed or seed < 0):
            raise ValueError('seed must be a nonnegative integer.')
        self.population_size = int(population_size)
        self.max_iters = int(max_iters)
        self.window = int(window)
        self.tol = float(tol)
        self.ks_tol = float(ks_tol)
        self.ks_guard = float(ks_guard)
        self.check_uniqueness = bool(check_uniqueness)
        self.seed = None if seed is None else int(seed)
        self.workers = int(workers)
        self.block_size = int(block_size)
        self.allow_infinite_mean = bool(allow_infinite_mean)
        self.max_offspring = int(max_offspring)

    @classmethod
    def from_dict(cls, d):
        """
        Construct the configuration from a dictionary, rejecting unknown
        keys.
        """
        known = cls().to_dict().keys()
        unknown = [k for k in d.keys() if k not in known]
        if len(unknown) > 0:
            raise ValueError(f'Unknown solver parameters: {", ".join(unknown)}')
        return cls(**d)

    def to_dict(self):
        return {'population_size': self.population_size, 'max_iters': self.max_iters,
                'window': self.window, 'tol': self.tol, 'ks_tol': self.ks_tol,
                'ks_guard': self.ks_guard, 'check_uniqueness': self.check_uniqueness,
                'seed': self.seed, 'workers': self.workers, 'block_size': self.block_size,
                'allow_infinite_mean': self.allow_infinite_mean,
                'max_offspring': self.max_offspring}

    def ks_threshold(self):
        """
        Kolmogorov-Smirnov guard, raised to the 1% critical value for two
        samples of the configured size.
        """
        return max(self.ks_guard, 1.63*numpy.sqrt(2/self.population_size))


class CavityPopulation:
    """
    Empirical sample of the cavity field.

    Args:
        samples (`numpy.ndarray`_):
            Field values; copied and made read-only.
        params (:class:`IsingParams`):
            Model parameters.
        model (:class:`~ising_cavity.models.degree.ForwardModel`):
            Forward degree law.
        iterations (:obj:`int`, optional):
            Number of iterations performed.
        init (:obj:`str`, optional):
            Start of the iteration: ``'free'``, ``'plus'``, or ``'warm'``.
        converged (:obj:`bool`, optional):
            Flag that the convergence criterion was met.
        diagnostics (array-like, optional):
            Trace of :math:`E[\\xi(h)]` after each iteration.
        metadata (:obj:`dict`, optional):
            Solver provenance.
    """
    def __init__(self, samples, params, model, iterations=0, init='free', converged=False,
                 diagnostics=None, metadata=None):
        self.samples = numpy.array(samples, dtype=float)
        self.samples.flags.writeable = False
        self.params = params
        self.model = model
        self.iterations = int(iterations)
        self.init = init
        self.converged = bool(converged)
        self.diagnostics = numpy.array([] if diagnostics is None else diagnostics, dtype=float)
        self.metadata = {} if metadata is None else dict(metadata)

    @classmethod
    def initial(cls, model, params, size, init='free'):
        """
        Construct the starting population.

        Args:
            model (:class:`~ising_cavity.models.degree.ForwardModel`):
                Forward degree law.
            params (:class:`IsingParams`):
                Model parameters.
            size (:obj:`int`):
                Population size.
            init (:obj:`str`, optional):
                ``'free'`` (:math:`h\\equiv B`) or ``'plus'``
                (:math:`h\\equiv\\infty`).
        """
        if init not in ['free', 'plus']:
            raise ValueError(f'Unknown population start "{init}"; use free or plus.')
        value = params.B if init == 'free' else numpy.inf
        return cls(numpy.full(size, value, dtype=float), params, model, init=init)

    @property
    def size(self):
        return self.samples.size

    def xi(self):
        """
        Return :math:`\\xi(h)` for every sample.
        """
        return xi(self.params, self.samples)

    def mean_xi(self):
        return float(numpy.mean(self.xi()))

    def is_valid(self):
        """
        Check that every sample is nonnegative and, after at least one
        iteration, finite.
        """
        if numpy.any(self.samples < 0):
            return False
        return self.iterations == 0 or bool(numpy.all(numpy.isfinite(self.samples)))

    def with_samples(self, samples, **kwargs):
        """
        Return a new population with the provided samples; other attributes
        are copied unless provided.
        """
        attr = dict(params=self.params, model=self.model, iterations=self.iterations,
                    init=self.init, converged=self.converged, diagnostics=self.diagnostics,
                    metadata=self.metadata)
        attr.update(kwargs)
        return CavityPopulation(samples, **attr)


def evolve(pop, steps, rng, workers=1, block_size=16384, allow_infinite_mean=False,
           max_offspring=None):
    """
    Advance a population by a number of iterations.

    Iteration ``t`` (counted from the population's first iteration) draws
    block ``b`` of new samples from the stream ``rng.child(t, b)``, so the
    result is reproducible for any number of workers.

    Args:
        pop (:class:`CavityPopulation`):
            Population to advance.
        steps (:obj:`int`):
            Number of iterations.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream for the iterations.
        workers (:obj:`int`, optional):
            Number of threads.
        block_size (:obj:`int`, optional):
            Number of samples per random-stream block.
        allow_infinite_mean (:obj:`bool`, optional):
            Permit forward laws with :math:`\\nu=\\infty`.
        max_offspring (:obj:`int`, optional):
            Cap on the offspring count per sample.  Only used with
            ``allow_infinite_mean``.

    Returns:
        :class:`CavityPopulation`: The advanced population, with the
        diagnostics trace extended by one entry per iteration.

    Raises:
        ValueError:
            Raised if :math:`\\nu=\\infty` and ``allow_infinite_mean`` is
            False.
    """
    fm = pop.model
    if not fm.nu_finite and not allow_infinite_mean:
        raise ValueError('Forward degree law has infinite mean; set allow_infinite_mean to '
                         'iterate anyway.')
    cap = max_offspring if allow_infinite_mean and not fm.nu_finite else None
    samples = pop.samples
    x = xi(pop.params, samples)
    trace = list(pop.diagnostics)
    n = samples.size
    B = pop.params.B

    for s in range(steps):
        def _block(gen, start, end, x=x):
            k = fm.sample(gen, size=end-start)
            if cap is not None:
                k = numpy.minimum(k, cap)
            j = gen.integers(0, n, size=int(numpy.sum(k)))
            owner = numpy.repeat(numpy.arange(end-start), k)
            return B + numpy.bincount(owner, weights=x[j], minlength=end-start)

        samples = map_blocks(_block, n, block_size, rng.child(pop.iterations+s),
                             workers=workers)
        x = xi(pop.params, samples)
        trace += [numpy.mean(x)]

    return pop.with_samples(samples, iterations=pop.iterations+steps, converged=False,
                            diagnostics=trace)


def ks_distance(a, b, tol=0.):
    """
    Kolmogorov-Smirnov distance between two populations.

    Point-mass populations (e.g., from regular trees) are compared by their
    location: the distance is 0 if the locations agree to relative
    tolerance ``tol`` and 1 otherwise.

    Args:
        a, b (`numpy.ndarray`_):
            Samples to compare.
        tol (:obj:`float`, optional):
            Relative tolerance for comparing point masses.

    Returns:
        :obj:`float`: The distance.
    """
    def _point(x):
        return numpy.ptp(x) <= 1e-9*max(numpy.amax(numpy.absolute(x)), 1e-300)

    if _point(a) and _point(b):
        ma, mb = numpy.mean(a), numpy.mean(b)
        return 0. if abs(ma - mb) <= tol*max(abs(ma), abs(mb)) else 1.
    return float(stats.ks_2samp(a, b).statistic)


def _run_solver(pop, cfg, rng):
    """
    Iterate until the convergence criterion is met or the iteration limit
    is reached.
    """
    w = cfg.window
    history = deque([pop.samples], maxlen=w+1)
    rel_change = numpy.inf
    ks = numpy.inf
    for i in range(cfg.max_iters):
        pop = evolve(pop, 1, rng, workers=cfg.workers, block_size=cfg.block_size,
                     allow_infinite_mean=cfg.allow_infinite_mean,
                     max_offspring=cfg.max_offspring)
        history.append(pop.samples)
        trace = pop.diagnostics
        if i+1 < 2*w:
            continue
        m1 = numpy.mean(trace[-w:])
        m0 = numpy.mean(trace[-2*w:-w])
        x = pop.xi()
        se = numpy.std(x)/numpy.sqrt(x.size)
        rel_change = abs(m1 - m0)/abs(m1) if m1 != 0 else abs(m1 - m0)
        if abs(m1 - m0) > cfg.tol*abs(m1) + 3*numpy.sqrt(2/w)*se:
            continue
        ks = ks_distance(history[-1], history[0], tol=cfg.tol)
        if ks < cfg.ks_threshold():
            meta = {'rel_change': rel_change, 'ks_lag': ks}
            return pop.with_samples(pop.samples, converged=True,
                                    metadata={**pop.metadata, **meta}), True
    meta = {'rel_change': rel_change, 'ks_lag': ks}
    return pop.with_samples(pop.samples, metadata={**pop.metadata, **meta}), False


def fixed_point(model, params, cfg, rng=None, init='free'):
    r"""
    Solve for the cavity-field fixed point.

    Args:
        model (:class:`~ising_cavity.models.degree.ForwardModel`):
            Forward degree law.  A
            :class:`~ising_cavity.models.degree.DegreeModel` is converted.
        params (:class:`IsingParams`):
            Model parameters; the field must be positive.
        cfg (:class:`SolverConfig`):
            Solver configuration.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`, optional):
            Random stream.  If None, the stream is built from ``cfg.seed``.
        init (:obj:`str`, :class:`CavityPopulation`, optional):
            Start of the iteration: ``'free'``, ``'plus'``, or a population
            to continue from (a warm start).

    Returns:
        :class:`CavityPopulation`: The converged population.  The
        free-versus-plus distance is included in its metadata when
        ``cfg.check_uniqueness`` is set.

    Raises:
        ValueError:
            Raised if :math:`B\leq 0` or if a warm-start population has the
            wrong size.
        NonConvergence:
            Raised if the convergence criterion is not met within
            ``cfg.max_iters`` iterations.
        NonUniqueFixedPoint:
            Raised if the free and plus fixed points differ by more than
            ``cfg.ks_tol``.
    """
    fm = model.forward() if hasattr(model, 'forward') else model
    if not params.B > 0:
        raise ValueError('The fixed-point solver requires B > 0.')
    if rng is None:
        rng = RandomStream(cfg.seed)

    def _start(start):
        if isinstance(start, CavityPopulation):
            if start.size != cfg.population_size:
                raise ValueError('Warm-start population has the wrong size.')
            return CavityPopulation(start.samples, params, fm, init='warm',
                                    metadata={'warm_start': True})
        return CavityPopulation.initial(fm, params, cfg.population_size, init=start)

    def _solve(start, stream):
        pop, ok = _run_solver(_start(start), cfg, stream)
        if not ok:
            raise NonConvergence(f'Population for {params!r} did not converge in '
                                 f'{cfg.max_iters} iterations.', pop)
        return pop

    pop = _solve(init, rng.child(0))
    if not cfg.check_uniqueness:
        return pop

    plus = _solve('plus', rng.child(1))
    free = pop if isinstance(init, str) and init == 'free' else _solve('free', rng.child(2))
    ks = ks_distance(free.samples, plus.samples, tol=cfg.tol)
    if ks >= cfg.ks_tol:
        raise NonUniqueFixedPoint(f'Free and plus fixed points differ for {params!r}: '
                                  f'KS distance {ks:.4f}.', free, plus, ks)
    return pop.with_samples(pop.samples, metadata={**pop.metadata, 'ks_free_plus': ks})


def moments(pop, nblocks=100):
    r"""
    Plug-in moments of the population and their jackknife errors.

    Args:
        pop (:class:`CavityPopulation`):
            Population; must be nonempty.
        nblocks (:obj:`int`, optional):
            Number of jackknife blocks.

    Returns:
        :obj:`dict`: Dictionary with keys ``xi``, ``xi2``, ``xi3``, ``h``,
        ``h2`` holding :math:`E[\xi(h)]`, :math:`E[\xi(h)^2]`,
        :math:`E[\xi(h)^3]`, :math:`E[h]`, and :math:`E[h^2]`; each value is
        a tuple with the estimate and its standard error.
    """
    if pop.size == 0:
        raise ValueError('Population is empty.')
    if not pop.converged:
        warnings.warn('Computing moments of an unconverged population.')
    x = pop.xi()
    h = pop.samples
    return {'xi': jackknife_mean(x, nblocks=nblocks),
            'xi2': jackknife_mean(x**2, nblocks=nblocks),
            'xi3': jackknife_mean(x**3, nblocks=nblocks),
            'h': jackknife_mean(h, nblocks=nblocks),
            'h2': jackknife_mean(h**2, nblocks=nblocks)}
