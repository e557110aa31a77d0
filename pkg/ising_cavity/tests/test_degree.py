
import warnings

import numpy
import pytest
from scipy import special, stats

from ising_cavity.models.degree import Regular, Poisson, PowerLaw, Empirical, make_model
from ising_cavity.models.degree import truncated_moment, sample_degree, sample_forward
from ising_cavity.models.degree import sample_size_biased
from ising_cavity.util.parallel import RandomStream


def test_regular():
    model = Regular(3)
    fm = model.forward()
    assert model.mean == 3
    assert fm.factorial_moments() == (2., 2., 0.)
    assert numpy.all(sample_forward(fm, RandomStream(1).generator(), size=100) == 2)
    assert numpy.all(sample_size_biased(model, RandomStream(1).generator(), size=100) == 3)


def test_poisson():
    model = Poisson(3.)
    fm = model.forward()
    assert numpy.isclose(model.mean, 3., rtol=1e-12)
    assert numpy.isclose(model.pmf(0), stats.poisson.pmf(0, 3.), rtol=1e-12)
    assert fm.factorial_moments() == (3., 9., 27.)
    assert numpy.isclose(fm.law.mean, 3., rtol=1e-10), 'Forward law should be Poisson(3)'

    assert model.law.k_min == 0, 'Default Poisson keeps the isolated-vertex atom'
    trunc = Poisson(3., truncate_zero=True)
    assert trunc.pmf(0) == 0
    assert trunc.law.k_min == 1
    assert numpy.amin(sample_degree(trunc, RandomStream(12).generator(), size=10000)) >= 1
    assert numpy.isclose(trunc.forward().nu, 3., rtol=1e-10), 'Truncation leaves the forward law'
    assert numpy.isclose(trunc.mean, 3/(1-numpy.exp(-3.)), rtol=1e-12)
    assert trunc.to_dict() == {'kind': 'poisson', 'lam': 3., 'truncate_zero': True}

    d = sample_degree(model, RandomStream(11).generator(), size=200000)
    assert abs(numpy.mean(d) - 3) < 0.03, 'Sample mean too far from lambda'


def test_power_law_moments():
    model = PowerLaw(3.5)
    assert numpy.isclose(model.pmf(1), 1/special.zeta(3.5), rtol=1e-12)
    assert numpy.isclose(model.pmf(1), 0.8875, atol=1e-4)
    fm = model.forward()
    nu = (special.zeta(1.5) - special.zeta(2.5))/special.zeta(2.5)
    assert numpy.isclose(fm.nu, nu, rtol=1e-8)
    assert numpy.isinf(fm.nu2), 'nu_2 should diverge for tau <= 4'

    fm = PowerLaw(4.5).forward()
    nu2 = (special.zeta(1.5) - 3*special.zeta(2.5) + 2*special.zeta(3.5))/special.zeta(3.5)
    assert numpy.isclose(fm.nu2, nu2, rtol=1e-6)
    assert numpy.isinf(fm.nu3), 'nu_3 should diverge for tau <= 5'
    assert numpy.isfinite(PowerLaw(5.5).forward().nu3)


def test_power_law_infinite_nu():
    fm = PowerLaw(2.5).forward()
    assert numpy.isinf(fm.nu)
    assert not fm.nu_finite
    with pytest.raises(ValueError):
        fm.size_biased()
    with pytest.raises(ValueError):
        PowerLaw(2.)


def test_truncated_moment():
    fm = PowerLaw(4.5).forward()
    for ell in [1, 5, 50]:
        total = truncated_moment(fm, 1, ell) + truncated_moment(fm, 1, ell, tail=True)
        assert numpy.isclose(total, fm.nu, rtol=1e-8), f'Moments do not add up at ell={ell}'
    with pytest.raises(ValueError):
        truncated_moment(fm, 3, 10, tail=True)
    with pytest.raises(ValueError):
        truncated_moment(fm, 1, 0)


def test_power_law_sampling():
    model = PowerLaw(4.5)
    d = model.sample(RandomStream(5).generator(), size=200000)
    assert numpy.amin(d) >= 1
    mean = special.zeta(3.5)/special.zeta(4.5)
    assert numpy.isclose(model.mean, mean, rtol=1e-10)
    assert abs(numpy.mean(d) - mean) < 0.01
    assert numpy.isscalar(model.sample(RandomStream(5).generator()))


def test_tail_constants():
    lo, hi = PowerLaw(3.5).forward().tail_constants(k_max=1000)
    assert 0 < lo <= hi < numpy.inf

    # Frozen constants for k_max = 10^4
    for tau, expected in [(3.5, (0.2545587, 0.4969236)), (5., (0.0760616, 0.3079333))]:
        lo, hi = PowerLaw(tau).forward().tail_constants(k_max=10000)
        assert numpy.allclose([lo, hi], expected, rtol=1e-5, atol=0), \
                f"Tail constants changed for tau={tau}: {(lo, hi)}"
        # rho_{>=k} k^(tau-2) increases with k, so the extremes sit at the ends
        z = special.zeta(tau-1)
        assert numpy.isclose(lo, (z-1)/z, rtol=1e-10)
        assert numpy.isclose(hi, 10000**(tau-2)*special.zeta(tau-1, 10001)/z, rtol=1e-10)
    with pytest.raises(TypeError):
        Regular(3).forward().tail_constants()


def test_empirical():
    with pytest.warns(UserWarning, match='renormalizing'):
        model = Empirical({1: 1., 3: 1.})
    assert numpy.isclose(model.mean, 2.)
    assert numpy.isclose(model.forward().nu, 1.5)
    with pytest.warns(UserWarning, match='nearly trivial'):
        Empirical({'1': 0.995, '2': 0.005})
    with pytest.raises(ValueError):
        Empirical({0: 1.})


def test_make_model():
    model = make_model({'kind': 'power_law', 'tau': 4.5})
    assert isinstance(model, PowerLaw)
    assert model.to_dict() == {'kind': 'power_law', 'tau': 4.5, 'k_min': 1}
    assert make_model(model) is model
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', UserWarning)
        assert isinstance(make_model({'kind': 'empirical', 'pmf': {'2': 1.}}), Empirical)
    with pytest.raises(ValueError):
        make_model({'kind': 'geometric'})
    with pytest.raises(ValueError):
        make_model({'lam': 3.})


def _forward_chisquare(fm, k):
    """
    Chi-square goodness-of-fit p-value of forward-law draws ``k``.  Bins with
    fewer than 5 expected counts are merged into a single tail bin.
    """
    n = k.size
    assert numpy.all(fm.pmf(k) > 0), 'Draws outside the support of the forward law'
    top = fm.law.k_min
    while top <= fm.law.k_max and not 0 < n*fm.pmf(top) < 5:
        top += 1
    bins = numpy.array([j for j in range(fm.law.k_min, top) if fm.pmf(j) > 0])
    observed = [numpy.sum(k == j) for j in bins]
    expected = list(n*fm.pmf(bins))
    if fm.sf(top) > 0:
        observed += [numpy.sum(k >= top)]
        expected += [n*float(fm.sf(top))]
    observed = numpy.array(observed)
    expected = numpy.array(expected)
    assert observed.size > 2, 'Too few bins for a goodness-of-fit test'
    return stats.chisquare(observed, expected*n/numpy.sum(expected)).pvalue


@pytest.mark.parametrize('model,seed', [(Poisson(3.), 21), (PowerLaw(3.5), 22),
                                        (PowerLaw(4.5), 23),
                                        (Empirical({1: 0.2, 2: 0.3, 3: 0.5}), 24),
                                        (Empirical({1: 0.1, 4: 0.4, 7: 0.5}), 25)])
def test_forward_goodness_of_fit(model, seed):
    fm = model.forward()
    k = sample_forward(fm, RandomStream(seed).generator(), size=1000000)
    assert numpy.amin(k) >= 0
    p = _forward_chisquare(fm, k)
    assert p > 1e-3, f'Forward draws of {model!r} inconsistent with the forward law (p={p})'


def test_regular_forward_degenerate():
    fm = Regular(4).forward()
    k = sample_forward(fm, RandomStream(26).generator(), size=10000)
    assert numpy.all(k == 3), 'Regular forward law is a point mass at d-1'
    assert fm.pmf(3) == 1. and fm.sf(4) == 0.


def test_empirical_size_biased_frequency():
    model = Empirical({1: 0.5, 3: 0.5})
    n = 1000000
    d = sample_size_biased(model, RandomStream(27).generator(), size=n)
    assert set(numpy.unique(d)) == {1, 3}
    freq = numpy.mean(d == 3)
    sigma = numpy.sqrt(0.75*0.25/n)
    assert abs(freq - 0.75) < 3*sigma, f'P(D*=3) = {freq}, expected 0.75'


def test_power_law_forward_tail_frequency():
    fm = PowerLaw(3.5).forward()
    n = 1000000
    k = sample_forward(fm, RandomStream(28).generator(), size=n)
    for j in [1, 10, 100]:
        expected = float(fm.sf(j))
        assert numpy.isclose(expected, special.zeta(2.5, j+1)/special.zeta(2.5), rtol=1e-10)
        freq = numpy.mean(k >= j)
        sigma = numpy.sqrt(expected*(1-expected)/n)
        assert abs(freq - expected) < 3*sigma, \
                f'Tail frequency at k={j} is {freq}, expected {expected}'


@pytest.mark.parametrize('model,nu', [
    (Regular(3), 2.),
    (Poisson(3.), None),
    (Empirical({1: 0.2, 2: 0.3, 3: 0.5}), 3.6/2.3),
    (PowerLaw(4.5), (special.zeta(2.5) - special.zeta(3.5))/special.zeta(3.5)),
    (PowerLaw(3.5), (special.zeta(1.5) - special.zeta(2.5))/special.zeta(2.5))])
def test_nu_matches_degree_moments(model, nu):
    if nu is None:
        # Sum E[D(D-1)]/E[D] directly from the Poisson pmf
        d = numpy.arange(101)
        p = stats.poisson.pmf(d, model.lam)
        nu = numpy.sum(d*(d-1)*p)/numpy.sum(d*p)
    fm = model.forward()
    assert numpy.isclose(fm.nu, nu, rtol=1e-10, atol=0), \
            f'nu = {fm.nu} for {model!r}; E[D(D-1)]/E[D] = {nu}'
    if not isinstance(model, PowerLaw):
        k = numpy.arange(fm.law.k_max+1)
        assert numpy.isclose(numpy.sum(k*fm.pmf(k)), nu, rtol=1e-10, atol=0)
