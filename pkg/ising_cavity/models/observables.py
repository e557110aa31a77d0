r"""
Magnetization and susceptibility from the cavity fixed point.

The magnetization per vertex of the random tree is

.. math::

    M(\beta,B) = E\Big[\tanh\Big(B + \sum_{i=1}^{D}\xi(h_i)\Big)\Big].

Below the critical temperature the zero-field susceptibility has the closed
form :math:`\chi(\beta,0^+) = 1 + E[D]\hat\beta/(1-\nu\hat\beta)`.  For
general :math:`(\beta,B)` the susceptibility is computed from its expansion
over path lengths :math:`\ell`,

.. math::

    \chi(\beta,B) = E[1-\tanh^2(h_\varnothing)] + \sum_{\ell\geq 1}
        \frac{E[D]}{\nu} (\hat\beta\nu)^\ell\,
        E\Big[(1-\tanh^2 h^*_0) \prod_{i=1}^{\ell}
        \Big(1 + \frac{\sinh^2 h^*_i}{\cosh^2\beta}\Big)^{-1}\Big],

where the expectation is over a size-biased *spine*: the root has
:math:`D^*` children, the spine vertices :math:`1\leq i<\ell` have
:math:`K^*` children, and the endpoint field :math:`h^*_\ell` is drawn from
the population.  Each spine field is built from its spine child and
:math:`K^*-1` fields resampled from the population,
:math:`h^*_i = B + \xi(h^*_{i+1}) + \sum_j \xi(h_{i,j})`.  The expansion is
estimated with an equal spine budget per depth.

.. include:: ../include/links.rst
"""
import warnings

import numpy
from tqdm import tqdm

from ..util.bitmask import BitMask
from ..util.parallel import map_blocks
from .cavity import IsingParams, NonConvergence, NonUniqueFixedPoint, SolverConfig
from .cavity import fixed_point, xi
from .util import jackknife_mean, sech2, spine_weight


class ThermoPointBitMask(BitMask):
    """
    Quality flags for a single :class:`ThermoPoint`.
    """
    def __init__(self):
        bits = {'NONCONVERGED': 'Cavity population did not meet the convergence criterion',
                'NONUNIQUE': 'Free-start and plus-start fixed points disagree',
                'SOLVER_FAILED': 'No cavity population could be computed',
                'CHI_FAILED': 'Susceptibility could not be computed',
                'TRUNCATION_UNBOUNDED': 'Truncation error of the path sum is not bounded'}
        super().__init__(list(bits.keys()), descr=list(bits.values()))


class ThermoPoint:
    """
    Magnetization and susceptibility at one :math:`(\\beta,B)` grid point.

    Args:
        beta (:obj:`float`):
            Inverse temperature.
        B (:obj:`float`):
            External field.
        M, M_se (:obj:`float`, optional):
            Magnetization and its standard error.
        chi, chi_se (:obj:`float`, optional):
            Susceptibility and its standard error.
        chi_method (:obj:`str`, optional):
            ``'ClosedFormSubcritical'`` or ``'PathMC'``.
        trunc_bound (:obj:`float`, optional):
            Bound on the truncation error of the path sum.
        n_samples (:obj:`int`, optional):
            Number of Monte Carlo draws for the magnetization.
        seed (:obj:`int`, optional):
            Master seed.
        flags (:obj:`int`, optional):
            :class:`ThermoPointBitMask` value.
        metadata (:obj:`dict`, optional):
            Solver provenance.
    """
    bitmask = ThermoPointBitMask()
    columns = ['beta', 'B', 'M', 'M_se', 'chi', 'chi_se', 'chi_method', 'trunc_bound', 'seed',
               'flags']

    def __init__(self, beta, B, M=numpy.nan, M_se=numpy.nan, chi=numpy.nan, chi_se=numpy.nan,
                 chi_method='', trunc_bound=numpy.nan, n_samples=0, seed=None, flags=0,
                 metadata=None):
        self.beta = float(beta)
        self.B = float(B)
        self.M = float(M)
        self.M_se = float(M_se)
        self.chi = float(chi)
        self.chi_se = float(chi_se)
        self.chi_method = chi_method
        self.trunc_bound = float(trunc_bound)
        self.n_samples = int(n_samples)
        self.seed = seed
        self.flags = int(flags)
        self.metadata = {} if metadata is None else metadata

    @property
    def field_B(self):
        return self.B

    def flag(self, name):
        self.flags = int(self.bitmask.turn_on(self.flags, name))

    def flagged(self, name=None):
        return self.bitmask.flagged(self.flags, flag=name)

    def row(self):
        """
        Return the values in the order of :attr:`columns`.
        """
        return [self.beta, self.B, self.M, self.M_se, self.chi, self.chi_se, self.chi_method,
                self.trunc_bound, -1 if self.seed is None else self.seed,
                self.bitmask.to_string(self.flags)]

    def __repr__(self):
        return (f'ThermoPoint(beta={self.beta}, B={self.B}, M={self.M}, chi={self.chi}, '
                f'flags={self.bitmask.to_string(self.flags)!r})')


class SpineSample:
    """
    Samples of one depth of the spine expansion.

    Args:
        depth (:obj:`int`):
            Path length :math:`\\ell`.
        root_term (`numpy.ndarray`_):
            :math:`1-\\tanh^2(h^*_0)` for each spine.
        weight (`numpy.ndarray`_):
            Product of the spine weights for each spine; all ones at depth 0.
    """
    def __init__(self, depth, root_term, weight):
        self.depth = int(depth)
        self.root_term = numpy.asarray(root_term, dtype=float)
        self.weight = numpy.asarray(weight, dtype=float)

    @property
    def size(self):
        return self.root_term.size

    def terms(self):
        return self.root_term * self.weight


class SweepConfig:
    """
    Configuration of a temperature/field sweep.

    Args:
        solver (:class:`~ising_cavity.models.cavity.SolverConfig`, :obj:`dict`, optional):
            Solver configuration.
        n_magnetization (:obj:`int`, optional):
            Number of Monte Carlo draws for each magnetization.
        n_spines (:obj:`int`, optional):
            Total number of spines for each path-expansion susceptibility.
        warm_start (:obj:`bool`, optional):
            Start each fixed point from the previous converged population.
        ell_max (:obj:`int`, optional):
            Maximum path length; if None, chosen per point (see
            :func:`default_ell_max`).
    """
    def __init__(self, solver=None, n_magnetization=100000, n_spines=100000, warm_start=True,
                 ell_max=None):
        self.solver = SolverConfig() if solver is None \
                        else (SolverConfig.from_dict(solver) if isinstance(solver, dict)
                              else solver)
        if int(n_magnetization) != n_magnetization or n_magnetization < 1000:
            raise ValueError('n_magnetization must be an integer >= 1000.')
        if int(n_spines) != n_spines or n_spines < 1:
            raise ValueError('n_spines must be a positive integer.')
        if ell_max is not None and (int(ell_max) != ell_max or ell_max < 0):
            raise ValueError('ell_max must be a nonnegative integer.')
        self.n_magnetization = int(n_magnetization)
        self.n_spines = int(n_spines)
        self.warm_start = bool(warm_start)
        self.ell_max = None if ell_max is None else int(ell_max)

    def to_dict(self):
        return {'solver': self.solver.to_dict(), 'n_magnetization': self.n_magnetization,
                'n_spines': self.n_spines, 'warm_start': self.warm_start,
                'ell_max': self.ell_max}


def magnetization(model, pop, n, rng, workers=1, block_size=16384):
    """
    Monte Carlo magnetization per vertex.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model.
        pop (:class:`~ising_cavity.models.cavity.CavityPopulation`):
            Fixed-point population.  Unconverged populations are used with a
            warning.
        n (:obj:`int`):
            Number of draws; at least 1000.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream.
        workers (:obj:`int`, optional):
            Number of threads.
        block_size (:obj:`int`, optional):
            Draws per random-stream block.

    Returns:
        :obj:`tuple`: The magnetization and its jackknife standard error.
    """
    if n < 1000:
        raise ValueError('Magnetization requires at least 1000 draws.')
    if not pop.converged:
        warnings.warn(f'Magnetization computed from an unconverged population at '
                      f'{pop.params!r}.')
    x = pop.xi()
    B = pop.params.B

    def _block(gen, start, end):
        d = model.sample(gen, size=end-start)
        j = gen.integers(0, x.size, size=int(numpy.sum(d)))
        owner = numpy.repeat(numpy.arange(end-start), d)
        return numpy.tanh(B + numpy.bincount(owner, weights=x[j], minlength=end-start))

    return jackknife_mean(map_blocks(_block, n, block_size, rng, workers=workers))


def branching_ratio(params, fm):
    r"""
    Return :math:`\hat\beta\nu`, which is 0 at :math:`\beta=0` even if
    :math:`\nu=\infty`.
    """
    return 0. if params.beta_hat == 0 else params.beta_hat * fm.nu


def magnetization_upper_bound(model, params, fm=None):
    r"""
    Upper bound on the magnetization above the critical temperature,
    :math:`M(\beta,B)\leq B(1+\hat\beta E[D]/(1-\hat\beta\nu))`.

    Raises:
        ValueError:
            Raised if :math:`\hat\beta\nu\geq 1`.
    """
    _fm = model.forward() if fm is None else fm
    bn = branching_ratio(params, _fm)
    if not bn < 1:
        raise ValueError('Magnetization bound requires beta_hat * nu < 1.')
    return params.B * (1 + params.beta_hat*model.mean/(1 - bn))


def susceptibility_subcritical(model, params, fm=None):
    r"""
    Closed-form zero-field susceptibility above the critical temperature,
    :math:`\chi(\beta,0^+) = 1 + E[D]\hat\beta/(1-\nu\hat\beta)`.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model.
        params (:class:`~ising_cavity.models.cavity.IsingParams`):
            Model parameters; the field is ignored.
        fm (:class:`~ising_cavity.models.degree.ForwardModel`, optional):
            Forward law; constructed if not provided.

    Returns:
        :obj:`float`: Susceptibility.

    Raises:
        ValueError:
            Raised if :math:`\nu` is infinite or :math:`\hat\beta\nu\geq 1`.
    """
    _fm = model.forward() if fm is None else fm
    if not _fm.nu_finite:
        raise ValueError('Closed-form susceptibility requires a finite nu.')
    bn = branching_ratio(params, _fm)
    if not bn < 1:
        raise ValueError(f'Closed-form susceptibility requires beta_hat * nu < 1; got {bn}.')
    return 1 + model.mean*params.beta_hat/(1 - bn)


def default_ell_max(model, fm, params, rtol=1e-4, cap=10000):
    r"""
    Default maximum path length of the susceptibility expansion.

    Above the critical temperature (:math:`\hat\beta\nu<1`), this is the
    smallest :math:`\ell` for which the geometric bound on the omitted
    terms, :math:`E[D]\hat\beta(\hat\beta\nu)^{\ell}/(1-\hat\beta\nu)`, is
    below ``rtol`` times the closed-form susceptibility.  Otherwise, it is
    :math:`\lceil 4/(\beta-\beta_c)\rceil`.  Both are capped at ``cap``.
    """
    bn = branching_ratio(params, fm)
    if params.beta_hat == 0 or fm.nu == 0:
        return 0
    if bn < 1:
        chi = 1 + model.mean*params.beta_hat/(1 - bn)
        # Solve ED bh bn^ell / (1-bn) < rtol chi for ell
        ell = numpy.log(rtol*chi*(1-bn)/(model.mean*params.beta_hat))/numpy.log(bn)
        return int(min(max(numpy.ceil(ell), 1), cap))
    excess = params.beta - numpy.arctanh(1/fm.nu)
    return cap if excess <= 0 else int(min(numpy.ceil(4/excess), cap))


def sample_spines(model, fm, pop, params, depth, n, rng, workers=1, block_size=16384):
    """
    Sample spines of one depth of the susceptibility expansion.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model.
        fm (:class:`~ising_cavity.models.degree.ForwardModel`):
            Forward law; must have a finite mean.
        pop (:class:`~ising_cavity.models.cavity.CavityPopulation`):
            Fixed-point population.
        params (:class:`~ising_cavity.models.cavity.IsingParams`):
            Model parameters.
        depth (:obj:`int`):
            Path length :math:`\\ell`.
        n (:obj:`int`):
            Number of spines.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream.
        workers (:obj:`int`, optional):
            Number of threads.
        block_size (:obj:`int`, optional):
            Spines per random-stream block.

    Returns:
        :class:`SpineSample`: The root terms and weights of each spine.
    """
    x = pop.xi()
    N = x.size
    B = params.B
    root_law = model.law if depth == 0 else model.size_biased()
    spine_law = None if depth < 2 else fm.size_biased()

    def _sum_resampled(gen, counts):
        j = gen.integers(0, N, size=int(numpy.sum(counts)))
        owner = numpy.repeat(numpy.arange(counts.size), counts)
        return numpy.bincount(owner, weights=x[j], minlength=counts.size)

    def _block(gen, start, end):
        m = end - start
        if depth == 0:
            h0 = B + _sum_resampled(gen, root_law.sample(gen, size=m))
            return numpy.column_stack((sech2(h0), numpy.ones(m)))
        h = pop.samples[gen.integers(0, N, size=m)]
        weight = spine_weight(params.beta, h)
        for _ in range(depth-1):
            h = B + xi(params, h) + _sum_resampled(gen, spine_law.sample(gen, size=m) - 1)
            weight = weight * spine_weight(params.beta, h)
        h0 = B + xi(params, h) + _sum_resampled(gen, root_law.sample(gen, size=m) - 1)
        return numpy.column_stack((sech2(h0), weight))

    result = map_blocks(_block, n, block_size, rng, workers=workers)
    return SpineSample(depth, result[:,0], result[:,1])


def _empirical_tail(terms, nfit=10):
    """
    Geometric extrapolation of the omitted terms of the expansion from the
    decay of the last computed terms.
    """
    m = min(nfit, terms.size-1)
    if m < 1 or not terms[-1] > 0 or not terms[-1-m] > 0:
        return numpy.inf
    ratio = (terms[-1]/terms[-1-m])**(1/m)
    return terms[-1]*ratio/(1-ratio) if ratio < 1 else numpy.inf


def susceptibility_path_mc(model, fm, pop, params, ell_max=None, n_spines=100000, rng=None,
                           workers=1, block_size=16384):
    """
    Susceptibility from the size-biased spine expansion.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model.
        fm (:class:`~ising_cavity.models.degree.ForwardModel`):
            Forward law; must have a finite mean.
        pop (:class:`~ising_cavity.models.cavity.CavityPopulation`):
            Converged fixed-point population.
        params (:class:`~ising_cavity.models.cavity.IsingParams`):
            Model parameters.
        ell_max (:obj:`int`, optional):
            Maximum path length; see :func:`default_ell_max`.
        n_spines (:obj:`int`, optional):
            Total number of spines, split equally among the depths (at least
            64 per depth).
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream; depth :math:`\\ell` uses child :math:`\\ell`.
        workers (:obj:`int`, optional):
            Number of threads.
        block_size (:obj:`int`, optional):
            Spines per random-stream block.

    Returns:
        :obj:`tuple`: The susceptibility, its standard error, and the bound
        on the truncation error (geometric above the critical temperature,
        extrapolated from the decay of the last terms otherwise;
        ``numpy.inf`` if the terms do not decay).

    Raises:
        ValueError:
            Raised if :math:`\\nu` is infinite, if the population has not
            converged, or if :math:`B=0` below the critical temperature.
    """
    if rng is None:
        raise ValueError('A random stream is required.')
    if not fm.nu_finite:
        raise ValueError('Spine expansion requires a finite nu.')
    if not pop.converged:
        raise ValueError('Spine expansion requires a converged population.')
    bn = branching_ratio(params, fm)
    if params.B == 0 and not bn < 1:
        raise ValueError('Spine expansion below the critical temperature requires B > 0.')
    _ell_max = default_ell_max(model, fm, params) if ell_max is None else int(ell_max)
    n_per = max(64, n_spines // (_ell_max+1))

    terms = numpy.zeros(_ell_max+1, dtype=float)
    var = numpy.zeros(_ell_max+1, dtype=float)
    for ell in range(_ell_max+1):
        # E[D] nu^(ell-1) beta_hat^ell, written to allow nu = 0
        pref = 1. if ell == 0 else model.mean * params.beta_hat * bn**(ell-1)
        if pref == 0:
            break
        spines = sample_spines(model, fm, pop, params, ell, n_per, rng.child(ell),
                               workers=workers, block_size=block_size)
        t = spines.terms()
        terms[ell] = pref*numpy.mean(t)
        var[ell] = pref**2*numpy.var(t, ddof=1)/t.size
    if bn < 1:
        trunc = 0. if params.beta_hat == 0 or fm.nu == 0 \
                    else model.mean*params.beta_hat*bn**_ell_max/(1-bn)
    else:
        trunc = _empirical_tail(terms)
    return float(numpy.sum(terms)), float(numpy.sqrt(numpy.sum(var))), float(trunc)


def thermo_sweep(model, grid, cfg, rng, verbose=False):
    """
    Compute a :class:`ThermoPoint` for each :math:`(\\beta,B)` in a grid.

    Points with :math:`\\hat\\beta\\nu<1` use the closed-form susceptibility;
    all others use :func:`susceptibility_path_mc`.  A zero field is only
    allowed above the critical temperature, where :math:`M=0` exactly.
    Failures are recorded in each point's flags and the sweep continues.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model.
        grid (array-like):
            Sequence of :math:`(\\beta, B)` pairs.
        cfg (:class:`SweepConfig`):
            Sweep configuration.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream; grid point ``i`` uses child ``i``.
        verbose (:obj:`bool`, optional):
            Show a progress bar.

    Returns:
        :obj:`list`: One :class:`ThermoPoint` per grid entry.
    """
    if len(grid) == 0:
        raise ValueError('Sweep grid is empty.')
    fm = model.forward()
    scfg = cfg.solver
    points = []
    previous = None
    for i, (beta, B) in enumerate(tqdm(grid, disable=not verbose, desc='Sweep')):
        stream = rng.child(i)
        point = ThermoPoint(beta, B, n_samples=cfg.n_magnetization, seed=rng.seed)
        points += [point]
        try:
            params = IsingParams(beta, B)
        except ValueError as e:
            point.flag(['SOLVER_FAILED', 'CHI_FAILED'])
            point.metadata['error'] = str(e)
            continue
        bn = branching_ratio(params, fm)
        pop = None
        if B == 0:
            if bn < 1:
                point.M, point.M_se = 0., 0.
            else:
                point.flag('SOLVER_FAILED')
                point.metadata['error'] = 'B = 0 is only allowed above the critical temperature.'
        else:
            init = previous if cfg.warm_start and previous is not None else 'free'
            try:
                pop = fixed_point(fm, params, scfg, rng=stream.child(0), init=init)
            except NonConvergence as e:
                pop = e.population
                point.flag('NONCONVERGED')
            except NonUniqueFixedPoint as e:
                pop = e.free
                point.flag('NONUNIQUE')
            except ValueError as e:
                point.flag('SOLVER_FAILED')
                point.metadata['error'] = str(e)
            if pop is not None:
                point.metadata.update({'iterations': pop.iterations, 'init': pop.init,
                                       **pop.metadata})
                with warnings.catch_warnings():
                    if not pop.converged:
                        warnings.simplefilter('ignore', UserWarning)
                    point.M, point.M_se = magnetization(model, pop, cfg.n_magnetization,
                                                        stream.child(1), workers=scfg.workers,
                                                        block_size=scfg.block_size)
                if pop.converged:
                    previous = pop

        if fm.nu_finite and bn < 1:
            point.chi = susceptibility_subcritical(model, params, fm=fm)
            point.chi_se = 0.
            point.trunc_bound = 0.
            point.chi_method = 'ClosedFormSubcritical'
        elif pop is not None and pop.converged and fm.nu_finite:
            point.chi, point.chi_se, point.trunc_bound \
                    = susceptibility_path_mc(model, fm, pop, params, ell_max=cfg.ell_max,
                                             n_spines=cfg.n_spines, rng=stream.child(2),
                                             workers=scfg.workers, block_size=scfg.block_size)
            point.chi_method = 'PathMC'
            if not numpy.isfinite(point.trunc_bound):
                point.flag('TRUNCATION_UNBOUNDED')
        else:
            point.flag('CHI_FAILED')
    return points
