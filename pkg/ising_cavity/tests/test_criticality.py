
import numpy
import pytest

from ising_cavity.models.degree import Regular, Poisson, PowerLaw
from ising_cavity.models.criticality import critical_beta, gamma_constant
from ising_cavity.models.criticality import curie_weiss_susceptibility, FitRejected
from ising_cavity.models.criticality import ExponentConfig, ExponentFit, log_corrected
from ising_cavity.models.criticality import extrapolate_zero_field, fit_exponent_beta
from ising_cavity.models.criticality import fit_exponent_delta, fit_exponent_gamma
from ising_cavity.models.criticality import gamma_prime_diagnostic, transition_decay
from ising_cavity.models.util import transformed_interval
from ising_cavity.util.parallel import RandomStream

from .util import requires_long, small_solver


def test_critical_beta():
    assert numpy.isclose(critical_beta(Regular(3)), 0.5*numpy.log(3), rtol=1e-12)
    for lam in [2., 3., 5.]:
        assert numpy.isclose(critical_beta(Poisson(lam).forward()), numpy.arctanh(1/lam),
                             rtol=1e-12), f'Wrong critical temperature for Poisson({lam})'
    assert critical_beta(PowerLaw(2.5)) == 0.
    assert numpy.isinf(critical_beta(Regular(2))), 'A path has no phase transition'


def test_gamma_constant():
    limit, reference = gamma_constant(Poisson(3.))
    assert numpy.isclose(limit, 0.375, rtol=1e-10)
    assert numpy.isclose(reference, 1.125, rtol=1e-10)
    limit, reference = gamma_constant(Regular(3))
    assert numpy.isclose(limit, 1., rtol=1e-10)
    assert numpy.isclose(reference, 2., rtol=1e-10)
    with pytest.raises(ValueError):
        gamma_constant(PowerLaw(2.5))


def test_curie_weiss():
    assert numpy.isclose(curie_weiss_susceptibility(0.5), 2.)
    assert numpy.isinf(curie_weiss_susceptibility(1.))
    ratio = curie_weiss_susceptibility(1.01)/curie_weiss_susceptibility(0.99)
    assert abs(ratio - 0.5) < 0.05, 'Curie-Weiss amplitude ratio should be near 1/2'
    with pytest.raises(ValueError):
        curie_weiss_susceptibility(-1.)


def test_log_corrected():
    x = numpy.array([1e-3, 0.1])
    assert numpy.allclose(log_corrected(x), x/numpy.log(1/x))
    with pytest.raises(ValueError):
        log_corrected([0.5, 1.])
    with pytest.raises(ValueError):
        log_corrected(0.)


def test_extrapolate_zero_field():
    B = numpy.array([1e-4, 1e-5, 1e-6])
    M = 0.3 + 2*B
    m0, se, resid = extrapolate_zero_field(B, M, numpy.zeros(3))
    assert numpy.isclose(m0, 0.3, rtol=1e-10)
    assert se == 0.
    assert resid < 1e-12
    m0, se, resid = extrapolate_zero_field(B[:2], M[:2], [1e-3, 1e-3])
    assert numpy.isnan(resid)
    assert se > 1e-3
    with pytest.raises(ValueError):
        extrapolate_zero_field([1e-4], [0.3], [0.])


def test_exponent_config():
    cfg = ExponentConfig()
    assert cfg.b_grid[0] == 1e-4 and cfg.b_grid.size == 5
    assert ExponentConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()
    eps = cfg.eps_grid(1e-3, 1e-1)
    assert eps.size == cfg.n_eps and eps[0] > eps[-1]
    with pytest.raises(ValueError):
        ExponentConfig(b_grid=[1e-4, 1e-5, 1e-7])
    with pytest.raises(ValueError):
        ExponentConfig(n_eps=2)
    with pytest.raises(ValueError):
        ExponentConfig(eps_min=0.2, eps_max=0.1)
    with pytest.raises(ValueError):
        ExponentConfig.from_dict({'epsilon_min': 1e-3})


def test_exponent_fit():
    points = [{'eps': 0.1, 'used': True}, {'eps': 0.01, 'used': False}]
    fit = ExponentFit('beta', 0.5, 0.01, (0.52, 0.48), 0.99, (0.01, 0.1), False, points)
    assert fit.ci95 == (0.48, 0.52)
    assert fit.points_used == 1
    assert fit.to_dict()['points_used'] == 1
    with pytest.raises(ValueError):
        ExponentFit('beta', 0.5, 0.01, (0.48, 0.52), 0.99, (0.1, 0.01), False, points)


def test_transformed_interval():
    # Slope interval far from the pole maps end point to end point
    est, se, ci, method = transformed_interval(0.5, 0.01, 10, lambda s: 1/s, pole=0.)
    assert method == 'transformed'
    assert numpy.isclose(est, 2.)
    assert ci[0] < est < ci[1]
    assert numpy.isclose(se, 0.04, rtol=1e-3)

    # Slope interval spans the pole; the end-point map would exclude the estimate
    est, se, ci, method = transformed_interval(0.1, 0.2, 10, lambda s: 1/s, pole=0.)
    assert method == 'linearized'
    assert numpy.isclose(est, 10.)
    assert ci[0] <= est <= ci[1], 'Interval must contain the estimate'
    assert numpy.isclose(se, 20., rtol=1e-5), 'Error should be propagated as err/s^2'

    # No pole; identity and negation
    est, se, ci, method = transformed_interval(-1., 0.1, 5, lambda s: -s)
    assert method == 'transformed'
    assert est == 1. and numpy.isclose(se, 0.1)
    assert ci[0] < 1. < ci[1]


@pytest.mark.parametrize('model,limit', [(Poisson(3.), 0.375), (Regular(3), 1.)])
def test_fit_gamma(model, limit):
    fit = fit_exponent_gamma(model, ExponentConfig())
    assert abs(fit.estimate - 1) < 0.02, 'Mean-field susceptibility exponent should be 1'
    assert fit.r2 > 0.999
    assert fit.extras['constant_check'] == 'pass'
    assert numpy.isclose(fit.extras['constant_limit'], limit, rtol=1e-10)
    assert fit.points_used == ExponentConfig().n_eps
    assert fit.extras['ci_method'] == 'transformed'


def test_fit_gamma_errors():
    with pytest.raises(ValueError):
        fit_exponent_gamma(PowerLaw(2.5), ExponentConfig())
    with pytest.raises(ValueError):
        fit_exponent_gamma(Regular(2), ExponentConfig())
    with pytest.raises(ValueError):
        fit_exponent_gamma(Poisson(3.), ExponentConfig(gamma_eps_min=0.1, gamma_eps_max=0.5))


def test_fit_rejected():
    cfg = ExponentConfig(n_b=3, n_magnetization=1000,
                         solver=small_solver(population_size=1000, max_iters=2))
    with pytest.raises(FitRejected) as e:
        fit_exponent_delta(Poisson(3.), cfg, RandomStream(1))
    fit = e.value.fit
    assert fit.points_used == 0
    assert len(fit.points) == 3
    assert not any(p['converged'] for p in fit.points)


def test_transition_decay():
    cfg = ExponentConfig(solver=small_solver(max_iters=2000))
    fields, mean, err = transition_decay(Poisson(3.), cfg, RandomStream(3),
                                         fields=[3e-2, 1e-1])
    assert fields.tolist() == [1e-1, 3e-2]
    assert mean[1] < mean[0], 'Propagated field should vanish with B'
    assert numpy.all(err > 0)


def _long_cfg(**kwargs):
    par = {'solver': {'population_size': 200000, 'max_iters': 20000}}
    par.update(kwargs)
    return ExponentConfig(**par)


@requires_long
@pytest.mark.parametrize('model,expected,tol', [(Poisson(3.), 0.5, 0.07),
                                                (PowerLaw(4.5), 2/3, 0.1),
                                                (PowerLaw(3.5), 2., 0.3)])
def test_fit_beta(model, expected, tol):
    fit = fit_exponent_beta(model, _long_cfg(), RandomStream(101))
    assert abs(fit.estimate - expected) < tol, \
            f'Magnetization exponent {fit.estimate} too far from {expected}'


@requires_long
@pytest.mark.parametrize('model,expected,tol', [(Poisson(3.), 3., 0.3),
                                                (PowerLaw(4.), 2., 0.2)])
def test_fit_delta(model, expected, tol):
    fit = fit_exponent_delta(model, _long_cfg(), RandomStream(102))
    assert abs(fit.estimate - expected) < tol, \
            f'Critical-isotherm exponent {fit.estimate} too far from {expected}'


@requires_long
def test_fit_beta_log_correction():
    fit = fit_exponent_beta(PowerLaw(5.), _long_cfg(log_correction=True), RandomStream(103))
    assert fit.log_correction
    assert abs(fit.estimate - 0.5) < 0.1


@requires_long
def test_gamma_prime():
    fit = gamma_prime_diagnostic(Poisson(3.), _long_cfg(n_spines=200000), RandomStream(104))
    assert fit.estimate >= 0.85, 'Susceptibility should diverge below the critical temperature'
    assert fit.extras['plateau_status'] == 'EXPLORATORY'


@requires_long
def test_fit_beta_log_correction_discriminates():
    # Same stream, so both regressions see the same magnetization points
    kw = {'r2_min': 0.}
    corrected = fit_exponent_beta(PowerLaw(5.), _long_cfg(log_correction=True, **kw),
                                  RandomStream(103))
    pure = fit_exponent_beta(PowerLaw(5.), _long_cfg(log_correction=False, **kw),
                             RandomStream(103))
    assert numpy.array_equal([p['M0'] for p in corrected.points], [p['M0'] for p in pure.points],
                             equal_nan=True)
    assert corrected.r2 > pure.r2, \
            f'Log-corrected fit (r2={corrected.r2}) should beat pure fit (r2={pure.r2})'
    assert 0.4 <= corrected.estimate <= 0.6


@requires_long
def test_fit_beta_seed_stability():
    fit1 = fit_exponent_beta(Poisson(3.), _long_cfg(), RandomStream(105))
    fit2 = fit_exponent_beta(Poisson(3.), _long_cfg(), RandomStream(106))
    se = numpy.sqrt(fit1.stderr**2 + fit2.stderr**2)
    assert abs(fit1.estimate - fit2.estimate) < 3*se, \
            f'Seeds disagree: {fit1.estimate} vs {fit2.estimate} (combined stderr {se})'


@requires_long
def test_fit_beta_window_stability():
    full = fit_exponent_beta(Poisson(3.), _long_cfg(), RandomStream(107))
    narrow = fit_exponent_beta(Poisson(3.), _long_cfg(eps_max=0.05), RandomStream(107))
    assert narrow.window[1] < full.window[1]
    halfwidth = (full.ci95[1] - full.ci95[0] + narrow.ci95[1] - narrow.ci95[0])/2
    assert abs(full.estimate - narrow.estimate) < halfwidth, \
            f'Window shift moved the estimate from {full.estimate} to {narrow.estimate}'


@requires_long
def test_gamma_prime_bounded_below():
    fit = gamma_prime_diagnostic(Poisson(3.), _long_cfg(n_spines=200000), RandomStream(108))
    used = [p for p in fit.points if p['used']]
    assert len(used) >= 3
    scaled = numpy.array([p['chi']*p['eps'] for p in used])
    assert numpy.all(scaled > 0)
    assert numpy.min(scaled) > 0.2*numpy.max(scaled), \
            'chi*(beta-beta_c) should stay bounded away from zero'


@requires_long
def test_transition_decay_default_grid():
    fields, mean, err = transition_decay(Poisson(3.), _long_cfg(), RandomStream(109))
    assert numpy.allclose(fields, numpy.logspace(-2, -6, 5))
    assert numpy.all(numpy.diff(mean) < 0), 'Propagated field should decay monotonically'
    assert mean[-1] < 0.2*mean[0]
    assert numpy.all(err > 0)
