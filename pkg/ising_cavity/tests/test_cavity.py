
import warnings

import numpy
import pytest

from ising_cavity.models.degree import Regular, Poisson
from ising_cavity.models.cavity import IsingParams, SolverConfig, CavityPopulation
from ising_cavity.models.cavity import NonConvergence, xi, evolve, fixed_point, ks_distance
from ising_cavity.models.cavity import moments
from ising_cavity.oracle.exact import regular_tree_field
from ising_cavity.util.parallel import RandomStream

from .util import requires_long, small_solver


def test_params():
    p = IsingParams(0.5, 0.1)
    assert numpy.isclose(p.beta_hat, numpy.tanh(0.5))
    assert p.field_B == 0.1
    with pytest.raises(ValueError):
        IsingParams(-0.1)
    with pytest.raises(ValueError):
        IsingParams(0.1, -1.)
    with pytest.raises(ValueError):
        IsingParams(numpy.inf)


def test_xi_values():
    p = IsingParams(0.7)
    assert xi(p, 0.) == 0.
    assert xi(p, numpy.inf) == 0.7
    assert xi(p, -numpy.inf) == -0.7
    h = numpy.linspace(-5, 5, 101)
    assert numpy.allclose(xi(p, h), numpy.arctanh(p.beta_hat*numpy.tanh(h)), rtol=1e-12)
    assert numpy.allclose(xi(p, -h), -xi(p, h)), 'xi should be odd'
    # Large fields saturate at beta without loss of precision
    assert numpy.isclose(xi(p, 50.), 0.7, rtol=1e-12)
    assert xi(IsingParams(0.), numpy.linspace(0, 10, 11)).tolist() == [0.]*11


def test_xi_sandwich():
    gen = RandomStream(2024).generator()
    beta = gen.uniform(0, 3, size=100000)
    h = gen.exponential(2., size=100000)
    bh = numpy.tanh(beta)
    x = numpy.array([float(xi(IsingParams(b), _h)) for b, _h in zip(beta, h)])
    assert numpy.all(x >= 0)
    assert numpy.all(x <= numpy.minimum(bh*h, beta) + 1e-12)
    assert numpy.all(x >= bh*h - bh*h**3/(3*(1-bh**2)) - 1e-12)
    # Vectorized over fields for each of a few temperatures
    for b in [0.05, 0.5, 2.]:
        p = IsingParams(b)
        x = xi(p, h)
        assert numpy.all(x <= numpy.minimum(p.beta_hat*h, b) + 1e-12)
        assert numpy.all(x >= p.beta_hat*numpy.tanh(h) - 1e-12), \
                'xi should exceed its argument of atanh'


def test_solver_config():
    cfg = SolverConfig()
    assert cfg.population_size == 200000
    assert cfg.ks_threshold() == max(0.005, 1.63*numpy.sqrt(2/200000))
    assert SolverConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()
    with pytest.raises(ValueError):
        SolverConfig.from_dict({'pop_size': 10})
    with pytest.raises(ValueError):
        SolverConfig(population_size=1)
    with pytest.raises(ValueError):
        SolverConfig(tol=0.)


def test_evolve_zero_temperature():
    fm = Poisson(3.).forward()
    params = IsingParams(0., 0.3)
    pop = CavityPopulation.initial(fm, params, 1000)
    pop = evolve(pop, 3, RandomStream(1), block_size=100)
    assert pop.iterations == 3
    assert numpy.all(pop.samples == 0.3), 'At beta = 0 every field is B'
    assert pop.diagnostics.size == 3
    assert pop.is_valid()


def test_evolve_regular_by_hand():
    fm = Regular(3).forward()
    params = IsingParams(0.8, 1e-6)
    pop = evolve(CavityPopulation.initial(fm, params, 10), 2, RandomStream(5))
    # Every vertex has two children, so the population stays a point mass
    h1 = 1e-6 + 2*xi(params, 1e-6)
    h2 = 1e-6 + 2*xi(params, h1)
    assert numpy.allclose(pop.samples, h2, rtol=1e-12, atol=0)
    assert numpy.allclose(pop.diagnostics, [xi(params, h1), xi(params, h2)], rtol=1e-12, atol=0)
    assert pop.diagnostics[1] > pop.diagnostics[0]

    pop = evolve(pop, 20, RandomStream(5))
    assert numpy.all(numpy.diff(pop.diagnostics) > 0), \
            'Mean propagated field should increase from the free start above beta_c'


def test_evolve_monotone_in_field():
    fm = Poisson(3.).forward()
    lo = CavityPopulation.initial(fm, IsingParams(0.3, 0.01), 5000)
    hi = CavityPopulation.initial(fm, IsingParams(0.3, 0.05), 5000)
    # The offspring and parent draws do not depend on B, so the runs are coupled
    lo = evolve(lo, 5, RandomStream(9), block_size=1000)
    hi = evolve(hi, 5, RandomStream(9), block_size=1000)
    assert numpy.all(hi.samples >= lo.samples), 'Coupled fields must be ordered in B'
    assert numpy.all(numpy.sort(hi.samples) >= numpy.sort(lo.samples))
    assert numpy.all(hi.diagnostics > lo.diagnostics)


def test_plus_start():
    fm = Regular(3).forward()
    pop = CavityPopulation.initial(fm, IsingParams(0.4, 0.1), 10, init='plus')
    assert numpy.all(numpy.isinf(pop.samples))
    assert numpy.allclose(pop.xi(), 0.4)
    with pytest.raises(ValueError):
        CavityPopulation.initial(fm, IsingParams(0.4, 0.1), 10, init='warm')


def test_regular_fixed_point():
    model = Regular(3)
    cfg = SolverConfig(**small_solver(population_size=1000))
    for beta, B in [(0.3, 0.1), (0.8, 0.01)]:
        params = IsingParams(beta, B)
        pop = fixed_point(model, params, cfg, rng=RandomStream(1))
        assert pop.converged
        h = regular_tree_field(3, params)
        assert numpy.allclose(pop.samples, h, rtol=1e-3), \
                f'Population does not match the regular-tree field at beta={beta}'


def test_nonconvergence():
    cfg = SolverConfig(**small_solver(population_size=1000, max_iters=3))
    with pytest.raises(NonConvergence) as e:
        fixed_point(Poisson(3.), IsingParams(0.5, 0.01), cfg, rng=RandomStream(1))
    assert e.value.population.iterations == 3
    assert not e.value.population.converged


def test_zero_field():
    with pytest.raises(ValueError):
        fixed_point(Poisson(3.), IsingParams(0.2), SolverConfig(**small_solver()),
                    rng=RandomStream(1))


def test_warm_start():
    cfg = SolverConfig(**small_solver(population_size=5000))
    model = Poisson(3.)
    pop = fixed_point(model, IsingParams(0.4, 0.02), cfg, rng=RandomStream(4))
    warm = fixed_point(model, IsingParams(0.45, 0.02), cfg, rng=RandomStream(5), init=pop)
    assert warm.converged
    assert warm.init == 'warm'
    assert warm.mean_xi() > pop.mean_xi(), 'Fields should grow with beta'
    with pytest.raises(ValueError):
        fixed_point(model, IsingParams(0.45, 0.02), SolverConfig(**small_solver()),
                    rng=RandomStream(5), init=pop)


def test_determinism():
    cfg1 = SolverConfig(**small_solver(population_size=5000, block_size=1000, workers=1))
    cfg3 = SolverConfig(**small_solver(population_size=5000, block_size=1000, workers=3))
    params = IsingParams(0.45, 0.05)
    a = fixed_point(Poisson(3.), params, cfg1, rng=RandomStream(8))
    b = fixed_point(Poisson(3.), params, cfg3, rng=RandomStream(8))
    assert numpy.array_equal(a.samples, b.samples), 'Result should not depend on workers'
    assert a.iterations == b.iterations


def test_ks_distance():
    assert ks_distance(numpy.full(10, 2.), numpy.full(20, 2.)) == 0.
    assert ks_distance(numpy.full(10, 2.), numpy.full(20, 3.)) == 1.
    gen = RandomStream(1).generator()
    assert ks_distance(gen.normal(size=10000), gen.normal(size=10000)) < 0.05


def test_moments():
    cfg = SolverConfig(**small_solver(population_size=5000))
    pop = fixed_point(Poisson(3.), IsingParams(0.5, 0.05), cfg, rng=RandomStream(2))
    m = moments(pop)
    assert set(m.keys()) == {'xi', 'xi2', 'xi3', 'h', 'h2'}
    assert numpy.isclose(m['xi'][0], pop.mean_xi())
    assert m['xi'][1] > 0
    assert m['xi2'][0] >= m['xi'][0]**2


def test_uniqueness():
    cfg = SolverConfig(**small_solver(population_size=20000, check_uniqueness=True,
                                      ks_tol=0.05))
    pop = fixed_point(Poisson(3.), IsingParams(0.5, 0.05), cfg, rng=RandomStream(3))
    assert pop.metadata['ks_free_plus'] < 0.05


@requires_long
def test_free_plus_agreement():
    cfg = SolverConfig(population_size=200000, check_uniqueness=True)
    stream = RandomStream(17)
    pairs = [(b, B) for b in [0.2, 0.35, 0.5, 0.8] for B in [1e-3, 1e-2, 1e-1]]
    for i, (beta, B) in enumerate(pairs):
        pop = fixed_point(Poisson(3.), IsingParams(beta, B), cfg, rng=stream.child(i))
        assert pop.metadata['ks_free_plus'] < 0.01, f'Free/plus disagree at ({beta}, {B})'
