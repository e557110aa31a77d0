r"""
Critical temperature and critical exponents.

The inverse critical temperature of the Ising model on the random tree is
:math:`\beta_c = {\rm atanh}(1/\nu)`, where :math:`\nu` is the mean of the
forward degree law.  Near :math:`\beta_c` the magnetization and
susceptibility behave as

.. math::

    M(\beta,0^+) &\asymp (\beta-\beta_c)^{\boldsymbol\beta},
        \qquad \beta\searrow\beta_c, \\
    M(\beta_c,B) &\asymp B^{1/\boldsymbol\delta}, \qquad B\searrow 0, \\
    \chi(\beta,0^+) &\asymp (\beta_c-\beta)^{-\boldsymbol\gamma},
        \qquad \beta\nearrow\beta_c, \\
    \chi(\beta,0^+) &\gtrsim (\beta-\beta_c)^{-\boldsymbol\gamma'},
        \qquad \beta\searrow\beta_c.

The exponents are estimated by weighted linear regression in log-log space
over a window of distances from the critical point.  When the degree tail
sits at the boundary between the mean-field and the power-law regimes
(:math:`\tau=5`), the power laws acquire logarithmic corrections, which are
absorbed by regressing against :math:`\varepsilon/\log(1/\varepsilon)`.

.. include:: ../include/links.rst
"""
import warnings

import numpy
from scipy import optimize
from tqdm import tqdm

from .cavity import IsingParams, NonConvergence, SolverConfig, fixed_point, moments
from .observables import magnetization, susceptibility_subcritical, susceptibility_path_mc
from .util import fit_line, transformed_interval


def critical_beta(fm):
    r"""
    Inverse critical temperature, :math:`\beta_c = {\rm atanh}(1/\nu)`.

    Args:
        fm (:class:`~ising_cavity.models.degree.ForwardModel`):
            Forward law.  A
            :class:`~ising_cavity.models.degree.DegreeModel` is converted.

    Returns:
        :obj:`float`: :math:`\beta_c`; 0 if :math:`\nu=\infty`, and
        ``numpy.inf`` if :math:`\nu\leq 1` (no phase transition).
    """
    _fm = fm.forward() if hasattr(fm, 'forward') else fm
    if not _fm.nu_finite:
        return 0.
    if _fm.nu <= 1:
        return numpy.inf
    return float(numpy.arctanh(1/_fm.nu))


def gamma_constant(model):
    r"""
    Amplitude of the susceptibility divergence above the critical temperature.

    The closed-form susceptibility gives :math:`1-\hat\beta\nu \approx
    \nu(1-\hat\beta_c^2)(\beta_c-\beta)`, so that

    .. math::

        \lim_{\beta\nearrow\beta_c} \chi(\beta,0^+)(\beta_c-\beta) =
            \frac{E[D]\hat\beta_c^2}{1-\hat\beta_c^2}.

    The expression :math:`E[D]\hat\beta_c/(1-\hat\beta_c^2)` often quoted for
    this limit is larger by a factor :math:`\nu`; it is returned as well for
    comparison.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model.

    Returns:
        :obj:`tuple`: The limit and the quoted reference expression.

    Raises:
        ValueError:
            Raised if :math:`\beta_c` is not finite and positive.
    """
    bc = critical_beta(model.forward())
    if not numpy.isfinite(bc) or bc <= 0:
        raise ValueError('Susceptibility amplitude requires a finite, positive beta_c.')
    bhc = numpy.tanh(bc)
    return float(model.mean*bhc**2/(1-bhc**2)), float(model.mean*bhc/(1-bhc**2))


def curie_weiss_susceptibility(beta):
    r"""
    Susceptibility of the Curie-Weiss (complete graph) model at zero field.

    Below the critical point (:math:`\beta<1`), :math:`\chi=1/(1-\beta)`.
    Above it, :math:`\chi=(1-m^2)/(1-\beta(1-m^2))` with :math:`m>0` the
    spontaneous magnetization, :math:`m=\tanh(\beta m)`; close to the
    critical point this is half the value at the mirrored temperature.

    Args:
        beta (:obj:`float`):
            Inverse temperature.

    Returns:
        :obj:`float`: The susceptibility; ``numpy.inf`` at :math:`\beta=1`.
    """
    if beta < 0:
        raise ValueError('Inverse temperature must be nonnegative.')
    if beta < 1:
        return 1/(1-beta)
    if beta == 1:
        return numpy.inf
    f = lambda m: m - numpy.tanh(beta*m)
    lo = 1e-12
    m = optimize.brentq(f, lo, 1.) if f(lo) < 0 else numpy.sqrt(3*(beta-1)/beta**3)
    s = 1 - m**2
    return float(s/(1-beta*s))


class FitRejected(RuntimeError):
    """
    Raised when an exponent fit fails its quality gate.

    Args:
        message (:obj:`str`):
            Error message.
        fit (:class:`ExponentFit`):
            The rejected fit, kept for the diagnostics.
    """
    def __init__(self, message, fit):
        super().__init__(message)
        self.fit = fit


class ExponentFit:
    """
    Result of a critical-exponent regression.

    Args:
        exponent (:obj:`str`):
            ``'beta'``, ``'delta'``, ``'gamma'``, or ``'gamma_prime_lb'``.
        estimate (:obj:`float`):
            Exponent estimate.
        stderr (:obj:`float`):
            Standard error of the estimate.
        ci95 (:obj:`tuple`):
            95% confidence interval.
        r2 (:obj:`float`):
            Weighted coefficient of determination of the regression.
        window (:obj:`tuple`):
            Range of the regression variable (distance from :math:`\\beta_c`
            or field).
        log_correction (:obj:`bool`):
            Flag that the regression included the logarithmic correction.
        points (:obj:`list`):
            The points of the scan, as dictionaries.
        extras (:obj:`dict`, optional):
            Additional fit-specific diagnostics.
    """
    def __init__(self, exponent, estimate, stderr, ci95, r2, window, log_correction, points,
                 extras=None):
        if not window[0] < window[1]:
            raise ValueError('Fit window must be increasing.')
        self.exponent = exponent
        self.estimate = float(estimate)
        self.stderr = float(stderr)
        self.ci95 = (float(min(ci95)), float(max(ci95)))
        self.r2 = float(r2)
        self.window = (float(window[0]), float(window[1]))
        self.log_correction = bool(log_correction)
        self.points = points
        self.extras = {} if extras is None else extras

    @property
    def points_used(self):
        return int(numpy.sum([p.get('used', True) for p in self.points]))

    def to_dict(self):
        return {'exponent': self.exponent, 'estimate': self.estimate, 'stderr': self.stderr,
                'ci95': list(self.ci95), 'r2': self.r2, 'window': list(self.window),
                'log_correction': self.log_correction, 'points_used': self.points_used,
                'points': self.points, 'extras': self.extras}

    def report(self):
        """
        Print a summary of the fit to the screen.
        """
        print('-'*70)
        print(f'{"Exponent fit: " + self.exponent:^70}')
        print('-'*70)
        print(f'           Estimate: {self.estimate:.4f} +/- {self.stderr:.4f}')
        print(f'             95% CI: [{self.ci95[0]:.4f}, {self.ci95[1]:.4f}]')
        print(f'                R^2: {self.r2:.5f}')
        print(f'             Window: [{self.window[0]:.3e}, {self.window[1]:.3e}]')
        print(f'     Log correction: {self.log_correction}')
        print(f'        Points used: {self.points_used}/{len(self.points)}')
        for k, v in self.extras.items():
            if not isinstance(v, (list, dict)):
                print(f'{k:>19}: {v}')
        print('-'*70)


class ExponentConfig:
    """
    Grids, budgets, and quality gates for the exponent fits.

    Args:
        eps_min, eps_max (:obj:`float`, optional):
            Window in :math:`\\beta-\\beta_c` for the magnetization exponent.
        n_eps (:obj:`int`, optional):
            Number of log-spaced points in each temperature window.
        b_grid (array-like, optional):
            Geometric field grid used to extrapolate each magnetization to
            :math:`B\\searrow 0`; default :math:`10^{-4},\\ldots,10^{-8}`.
        delta_b_min, delta_b_max (:obj:`float`, optional):
            Field window at :math:`\\beta_c` for the :math:`\\delta` fit.
        n_b (:obj:`int`, optional):
            Number of log-spaced fields in the :math:`\\delta` fit.
        gamma_eps_min, gamma_eps_max (:obj:`float`, optional):
            Window in :math:`\\beta_c-\\beta` for the closed-form
            :math:`\\gamma` fit.
        gamma_prime_eps_min, gamma_prime_eps_max (:obj:`float`, optional):
            Window in :math:`\\beta-\\beta_c` for the :math:`\\gamma'`
            diagnostic.
        gamma_prime_B (:obj:`float`, optional):
            Field used for the :math:`\\gamma'` diagnostic.
        log_correction (:obj:`bool`, optional):
            Regress against :math:`x/\\log(1/x)` instead of :math:`x`.
        r2_min (:obj:`float`, optional):
            Minimum :math:`R^2` for an accepted fit.
        n_magnetization (:obj:`int`, optional):
            Monte Carlo draws per magnetization.
        n_spines (:obj:`int`, optional):
            Spine budget per path-expansion susceptibility.
        ell_max (:obj:`int`, optional):
            Maximum path length; chosen per point if None.
        warm_start (:obj:`bool`, optional):
            Warm-start the populations along each scan.
        solver (:class:`~ising_cavity.models.cavity.SolverConfig`, :obj:`dict`, optional):
            Solver configuration.
    """
    def __init__(self, eps_min=10**-2.5, eps_max=0.1, n_eps=12, b_grid=None, delta_b_min=1e-6,
                 delta_b_max=1e-3, n_b=12, gamma_eps_min=1e-6, gamma_eps_max=1e-3,
                 gamma_prime_eps_min=1e-2, gamma_prime_eps_max=1e-1, gamma_prime_B=1e-8,
                 log_correction=False, r2_min=0.98, n_magnetization=100000, n_spines=100000,
                 ell_max=None, warm_start=True, solver=None):
        for lo, hi, name in [(eps_min, eps_max, 'eps'), (delta_b_min, delta_b_max, 'delta_b'),
                             (gamma_eps_min, gamma_eps_max, 'gamma_eps'),
                             (gamma_prime_eps_min, gamma_prime_eps_max, 'gamma_prime_eps')]:
            if not 0 < lo < hi:
                raise ValueError(f'{name}_min must be positive and less than {name}_max.')
        if int(n_eps) != n_eps or n_eps < 3 or int(n_b) != n_b or n_b < 3:
            raise ValueError('Fits need at least three points; increase n_eps or n_b.')
        _b_grid = numpy.array([1e-4, 1e-5, 1e-6, 1e-7, 1e-8]) if b_grid is None \
                    else numpy.sort(numpy.asarray(b_grid, dtype=float))[::-1]
        if _b_grid.size < 2 or numpy.any(_b_grid <= 0):
            raise ValueError('b_grid must have at least two positive fields.')
        ratio = _b_grid[:-1]/_b_grid[1:]
        if not numpy.allclose(ratio, ratio[0], rtol=1e-6):
            raise ValueError('b_grid must be geometric.')
        if not 0 <= r2_min <= 1:
            raise ValueError('r2_min must be in [0, 1].')
        if not gamma_prime_B > 0:
            raise ValueError('gamma_prime_B must be positive.')
        self.eps_min = float(eps_min)
        self.eps_max = float(eps_max)
        self.n_eps = int(n_eps)
        self.b_grid = _b_grid
        self.delta_b_min = float(delta_b_min)
        self.delta_b_max = float(delta_b_max)
        self.n_b = int(n_b)
        self.gamma_eps_min = float(gamma_eps_min)
        self.gamma_eps_max = float(gamma_eps_max)
        self.gamma_prime_eps_min = float(gamma_prime_eps_min)
        self.gamma_prime_eps_max = float(gamma_prime_eps_max)
        self.gamma_prime_B = float(gamma_prime_B)
        self.log_correction = bool(log_correction)
        self.r2_min = float(r2_min)
        self.n_magnetization = int(n_magnetization)
        self.n_spines = int(n_spines)
        self.ell_max = None if ell_max is None else int(ell_max)
        self.warm_start = bool(warm_start)
        self.solver = SolverConfig() if solver is None \
                        else (SolverConfig.from_dict(solver) if isinstance(solver, dict)
                              else solver)

    @classmethod
    def from_dict(cls, d):
        """
        Construct the configuration from a dictionary, rejecting unknown
        keys.
        """
        known = cls().to_dict().keys()
        unknown = [k for k in d.keys() if k not in known]
        if len(unknown) > 0:
            raise ValueError(f'Unknown exponent-fit parameters: {", ".join(unknown)}')
        return cls(**d)

    def to_dict(self):
        return {'eps_min': self.eps_min, 'eps_max': self.eps_max, 'n_eps': self.n_eps,
                'b_grid': self.b_grid.tolist(), 'delta_b_min': self.delta_b_min,
                'delta_b_max': self.delta_b_max, 'n_b': self.n_b,
                'gamma_eps_min': self.gamma_eps_min, 'gamma_eps_max': self.gamma_eps_max,
                'gamma_prime_eps_min': self.gamma_prime_eps_min,
                'gamma_prime_eps_max': self.gamma_prime_eps_max,
                'gamma_prime_B': self.gamma_prime_B, 'log_correction': self.log_correction,
                'r2_min': self.r2_min, 'n_magnetization': self.n_magnetization,
                'n_spines': self.n_spines, 'ell_max': self.ell_max,
                'warm_start': self.warm_start, 'solver': self.solver.to_dict()}

    def eps_grid(self, lo, hi):
        """
        Log-spaced grid from ``hi`` down to ``lo``.
        """
        return numpy.logspace(numpy.log10(hi), numpy.log10(lo), self.n_eps)


def _require_transition(fm):
    bc = critical_beta(fm)
    if not numpy.isfinite(bc) or bc <= 0:
        raise ValueError(f'Exponent fits require a finite, positive beta_c; found {bc}.')
    return bc


def log_corrected(x):
    r"""
    Return :math:`x/\log(1/x)`, the regression variable with logarithmic
    corrections; requires :math:`0<x<1`.
    """
    _x = numpy.asarray(x, dtype=float)
    if numpy.any((_x <= 0) | (_x >= 1)):
        raise ValueError('Logarithmic corrections require 0 < x < 1.')
    return _x/numpy.log(1/_x)


def extrapolate_zero_field(B, M, M_se):
    r"""
    Extrapolate the magnetization to :math:`B\searrow 0`.

    With :math:`M(B) = M_0 + cB + \ldots` and the two smallest fields
    :math:`B` and :math:`qB` of a geometric grid, the Richardson estimate is
    :math:`M_0 = (qM(B) - M(qB))/(q-1)`.  The same estimate from the next
    pair of fields gives the extrapolation residual.

    Args:
        B (array-like):
            Geometric field grid.
        M, M_se (array-like):
            Magnetization and its standard error at each field.

    Returns:
        :obj:`tuple`: The extrapolated magnetization, its standard error,
        and the extrapolation residual (``numpy.nan`` if only two fields are
        provided).
    """
    srt = numpy.argsort(B)
    _B = numpy.asarray(B, dtype=float)[srt]
    _M = numpy.asarray(M, dtype=float)[srt]
    _se = numpy.asarray(M_se, dtype=float)[srt]
    if _B.size < 2:
        raise ValueError('Extrapolation requires at least two fields.')
    q = _B[1]/_B[0]
    m0 = (q*_M[0] - _M[1])/(q-1)
    se = numpy.sqrt((q*_se[0])**2 + _se[1]**2)/(q-1)
    if _B.size < 3:
        return float(m0), float(se), numpy.nan
    q1 = _B[2]/_B[1]
    m1 = (q1*_M[1] - _M[2])/(q1-1)
    return float(m0), float(se), float(abs(m0-m1))


def _regress(exponent, x, y, sig, window, log_correction, points, r2_min, transform=None,
             pole=None, extras=None):
    """
    Fit ``y = a + b x`` and build the :class:`ExponentFit`.

    ``transform`` maps the slope and its error onto the exponent and its
    error; the identity by default.  ``pole`` is the singular point of the
    transform (see :func:`~ising_cavity.models.util.transformed_interval`).
    """
    used = [p for p in points if p.get('used', True)]
    if len(used) < 3:
        fit = ExponentFit(exponent, numpy.nan, numpy.nan, (numpy.nan, numpy.nan), 0., window,
                          log_correction, points, extras=extras)
        raise FitRejected(f'Only {len(used)} usable points for the {exponent} fit.', fit)
    par, cov, r2, dof = fit_line(x, y, sig=sig)
    slope, slope_err = float(par[1]), float(numpy.sqrt(cov[1,1]))
    _transform = (lambda s: s) if transform is None else transform
    estimate, stderr, ci, ci_method = transformed_interval(slope, slope_err, dof, _transform,
                                                           pole=pole)
    _extras = {'intercept': float(par[0]), 'slope': slope, 'slope_err': slope_err,
               'ci_method': ci_method, **({} if extras is None else extras)}
    fit = ExponentFit(exponent, estimate, stderr, ci, r2, window, log_correction, points,
                      extras=_extras)
    if r2 < r2_min:
        raise FitRejected(f'{exponent} fit rejected: R^2 = {r2:.4f} < {r2_min}.', fit)
    return fit


def _solve_point(model, fm, params, cfg, stream, warm):
    """
    Fixed point and magnetization at one point of a scan.

    Returns the point dictionary and the population to warm-start from.
    """
    scfg = cfg.solver
    point = {'beta': params.beta, 'B': params.B}
    init = warm if cfg.warm_start and warm is not None else 'free'
    try:
        pop = fixed_point(fm, params, scfg, rng=stream.child(0), init=init)
    except NonConvergence as e:
        pop = e.population
        point['converged'] = False
    else:
        point['converged'] = True
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', UserWarning)
        point['M'], point['M_se'] = magnetization(model, pop, cfg.n_magnetization,
                                                  stream.child(1), workers=scfg.workers,
                                                  block_size=scfg.block_size)
    point['iterations'] = pop.iterations
    return point, (pop if pop.converged else warm)


def fit_exponent_beta(model, cfg, rng, verbose=False):
    r"""
    Fit the magnetization exponent, :math:`M(\beta_c+\varepsilon,0^+)
    \asymp \varepsilon^{\boldsymbol\beta}`.

    For each :math:`\varepsilon` in the window, the magnetization is
    computed on the geometric field grid ``cfg.b_grid`` and extrapolated to
    zero field (see :func:`extrapolate_zero_field`).  The temperatures are
    scanned from the largest :math:`\varepsilon` down, with each population
    warm-started from the previous one.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model.
        cfg (:class:`ExponentConfig`):
            Fit configuration.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream; point ``(i,j)`` of the scan uses child ``(i,j)``.
        verbose (:obj:`bool`, optional):
            Show a progress bar.

    Returns:
        :class:`ExponentFit`: The fit.

    Raises:
        ValueError:
            Raised if :math:`\beta_c` is not finite and positive.
        FitRejected:
            Raised if fewer than three points are usable or :math:`R^2` is
            below ``cfg.r2_min``.
    """
    fm = model.forward()
    bc = _require_transition(fm)
    eps = cfg.eps_grid(cfg.eps_min, cfg.eps_max)
    points = []
    warm = None
    for i, e in enumerate(tqdm(eps, disable=not verbose, desc='beta fit')):
        scan = []
        for j, B in enumerate(cfg.b_grid):
            p, warm = _solve_point(model, fm, IsingParams(bc+e, B), cfg, rng.child(i, j), warm)
            scan += [p]
        m0, se, resid = extrapolate_zero_field([p['B'] for p in scan], [p['M'] for p in scan],
                                               [p['M_se'] for p in scan])
        converged = all(p['converged'] for p in scan)
        points += [{'eps': float(e), 'beta': float(bc+e), 'M0': m0, 'M0_se': se,
                    'extrapolation_residual': resid, 'converged': converged,
                    'used': bool(converged and m0 > 0), 'scan': scan}]

    used = [p for p in points if p['used']]
    _eps = numpy.array([p['eps'] for p in used])
    m0 = numpy.array([p['M0'] for p in used])
    sig = numpy.array([numpy.sqrt(p['M0_se']**2 + numpy.nan_to_num(p['extrapolation_residual'])**2)
                       for p in used])/m0 if len(used) > 0 else None
    x = numpy.log(log_corrected(_eps) if cfg.log_correction else _eps)
    return _regress('beta', x, numpy.log(m0) if len(used) > 0 else m0, sig,
                    (cfg.eps_min, cfg.eps_max), cfg.log_correction, points, cfg.r2_min,
                    extras={'beta_c': bc})


def fit_exponent_delta(model, cfg, rng, verbose=False):
    r"""
    Fit the critical-isotherm exponent, :math:`M(\beta_c,B) \asymp
    B^{1/\boldsymbol\delta}`.

    The fields are scanned from the largest down, with warm starts.  The
    exponent is the inverse of the fitted slope of :math:`\log M` against
    :math:`\log B` (or :math:`\log(B/\log(1/B))` with logarithmic
    corrections).

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model.
        cfg (:class:`ExponentConfig`):
            Fit configuration.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream; field ``i`` uses child ``i``.
        verbose (:obj:`bool`, optional):
            Show a progress bar.

    Returns:
        :class:`ExponentFit`: The fit.
    """
    fm = model.forward()
    bc = _require_transition(fm)
    fields = numpy.logspace(numpy.log10(cfg.delta_b_max), numpy.log10(cfg.delta_b_min), cfg.n_b)
    points = []
    warm = None
    for i, B in enumerate(tqdm(fields, disable=not verbose, desc='delta fit')):
        p, warm = _solve_point(model, fm, IsingParams(bc, B), cfg, rng.child(i), warm)
        p['used'] = bool(p['converged'] and p['M'] > 0)
        points += [p]

    used = [p for p in points if p['used']]
    _B = numpy.array([p['B'] for p in used])
    M = numpy.array([p['M'] for p in used])
    sig = numpy.array([p['M_se'] for p in used])/M if len(used) > 0 else None
    x = numpy.log(log_corrected(_B) if cfg.log_correction else _B)
    return _regress('delta', x, numpy.log(M) if len(used) > 0 else M, sig,
                    (cfg.delta_b_min, cfg.delta_b_max), cfg.log_correction, points, cfg.r2_min,
                    transform=lambda s: 1/s, pole=0., extras={'beta_c': bc})


def fit_exponent_gamma(model, cfg):
    r"""
    Fit the susceptibility exponent above the critical temperature from the
    closed-form susceptibility, :math:`\chi(\beta_c-\varepsilon,0^+) \asymp
    \varepsilon^{-\boldsymbol\gamma}`.

    The fit also compares :math:`\chi\,\varepsilon` at the smallest
    :math:`\varepsilon` with the limit from :func:`gamma_constant`
    (``extras['constant_check']`` is ``'pass'`` if they agree to 1%).

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model; :math:`\nu` must be finite.
        cfg (:class:`ExponentConfig`):
            Fit configuration.

    Returns:
        :class:`ExponentFit`: The fit.
    """
    fm = model.forward()
    bc = _require_transition(fm)
    if cfg.gamma_eps_max >= bc:
        raise ValueError('gamma_eps_max must be smaller than beta_c.')
    eps = cfg.eps_grid(cfg.gamma_eps_min, cfg.gamma_eps_max)
    chi = numpy.array([susceptibility_subcritical(model, IsingParams(bc-e), fm=fm)
                       for e in eps])
    points = [{'eps': float(e), 'beta': float(bc-e), 'chi': float(c), 'used': True}
              for e, c in zip(eps, chi)]
    limit, reference = gamma_constant(model)
    amplitude = float(chi[-1]*eps[-1])
    rel_err = abs(amplitude - limit)/limit
    extras = {'beta_c': bc, 'constant': amplitude, 'constant_limit': limit,
              'constant_reference': reference, 'constant_rel_err': rel_err,
              'constant_check': 'pass' if rel_err < 0.01 else 'fail'}
    x = numpy.log(log_corrected(eps) if cfg.log_correction else eps)
    return _regress('gamma', x, numpy.log(chi), None, (cfg.gamma_eps_min, cfg.gamma_eps_max),
                    cfg.log_correction, points, cfg.r2_min, transform=lambda s: -s,
                    extras=extras)


def gamma_prime_diagnostic(model, cfg, rng, verbose=False):
    r"""
    Susceptibility below the critical temperature and the lower bound on
    :math:`\boldsymbol\gamma'`.

    The susceptibility is computed with :func:`susceptibility_path_mc` at
    field ``cfg.gamma_prime_B`` over the window in
    :math:`\varepsilon=\beta-\beta_c`.  The estimate is minus the slope of
    :math:`\log\chi` against :math:`\log\varepsilon`.  The plateau of
    :math:`(\hat\beta\nu-1)\chi` is also compared with the heuristic
    :math:`E[D]/(2\nu)`, half the value of :math:`(1-\hat\beta\nu)\chi` on the
    other side of the transition; this comparison is exploratory.  The
    Curie-Weiss ratio :math:`\chi(1+\varepsilon)/\chi(1-\varepsilon)` at the
    smallest :math:`\varepsilon` is reported for reference.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model; :math:`\nu` must be finite.
        cfg (:class:`ExponentConfig`):
            Fit configuration.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream; temperature ``i`` uses child ``i``.
        verbose (:obj:`bool`, optional):
            Show a progress bar.

    Returns:
        :class:`ExponentFit`: The fit, with exponent name
        ``'gamma_prime_lb'``.
    """
    fm = model.forward()
    bc = _require_transition(fm)
    scfg = cfg.solver
    eps = cfg.eps_grid(cfg.gamma_prime_eps_min, cfg.gamma_prime_eps_max)
    points = []
    warm = None
    for i, e in enumerate(tqdm(eps, disable=not verbose, desc='gamma_prime diagnostic')):
        params = IsingParams(bc+e, cfg.gamma_prime_B)
        stream = rng.child(i)
        p, warm = _solve_point(model, fm, params, cfg, stream, warm)
        p['eps'] = float(e)
        if p['converged']:
            pop = warm
            chi, chi_se, trunc = susceptibility_path_mc(model, fm, pop, params,
                                                        ell_max=cfg.ell_max,
                                                        n_spines=cfg.n_spines,
                                                        rng=stream.child(2),
                                                        workers=scfg.workers,
                                                        block_size=scfg.block_size)
            p.update({'chi': chi, 'chi_se': chi_se, 'trunc_bound': trunc,
                      'plateau': float((params.beta_hat*fm.nu-1)*chi)})
        p['used'] = bool(p['converged'] and p.get('chi', 0) > 0)
        points += [p]

    used = [p for p in points if p['used']]
    chi = numpy.array([p['chi'] for p in used])
    sig = numpy.array([p['chi_se'] for p in used])/chi if len(used) > 0 else None
    _eps = numpy.array([p['eps'] for p in used])
    cw = curie_weiss_susceptibility(1+eps[-1])/curie_weiss_susceptibility(1-eps[-1])
    extras = {'beta_c': bc,
              'plateau': used[-1]['plateau'] if len(used) > 0 else numpy.nan,
              'plateau_conjecture': float(model.mean/(2*fm.nu)),
              'plateau_status': 'EXPLORATORY',
              'curie_weiss_ratio': float(cw)}
    return _regress('gamma_prime_lb', numpy.log(_eps), numpy.log(chi) if len(used) > 0 else chi,
                    sig, (cfg.gamma_prime_eps_min, cfg.gamma_prime_eps_max), False, points,
                    cfg.r2_min, transform=lambda s: -s, extras=extras)


def transition_decay(model, cfg, rng, fields=None):
    r"""
    Mean propagated field :math:`E[\xi(h(\beta_c,B))]` along a decreasing
    field grid, which vanishes as :math:`B\searrow 0` for a continuous
    transition.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model.
        cfg (:class:`ExponentConfig`):
            Fit configuration; only the solver settings are used.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream; field ``i`` uses child ``i``.
        fields (array-like, optional):
            Fields; default :math:`10^{-2},\ldots,10^{-6}`.

    Returns:
        :obj:`tuple`: Arrays with the fields (decreasing), the mean
        propagated field, and its standard error.
    """
    fm = model.forward()
    bc = _require_transition(fm)
    _fields = numpy.logspace(-2, -6, 5) if fields is None \
                else numpy.sort(numpy.asarray(fields, dtype=float))[::-1]
    mean = numpy.zeros(_fields.size, dtype=float)
    err = numpy.zeros(_fields.size, dtype=float)
    warm = None
    for i, B in enumerate(_fields):
        init = warm if cfg.warm_start and warm is not None else 'free'
        pop = fixed_point(fm, IsingParams(bc, B), cfg.solver, rng=rng.child(i), init=init)
        mean[i], err[i] = moments(pop)['xi']
        warm = pop
    return _fields, mean, err
