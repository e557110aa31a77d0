r"""
Degree distributions and the laws derived from them.

A :class:`DegreeModel` describes the law of the root degree :math:`D` of a
random tree (or the degree of a uniformly chosen vertex of a graph).  The
cavity method consumes the *forward* law :math:`K`,

.. math::

    \rho_k = P(K=k) = \frac{(k+1)\, p_{k+1}}{E[D]},

collected by :class:`ForwardModel`, and the spine of the susceptibility
expansion needs the size-biased laws :math:`D^*` and :math:`K^*` with
:math:`P(X^*=k) = k P(X=k)/E[X]`.

All laws are represented by subclasses of :class:`DiscreteLaw`:

    - :class:`TableLaw` holds laws with (effectively) bounded support in a
      probability table.
    - :class:`ZetaLaw` holds power-law tails whose weights are sums of
      powers of :math:`y = x + s`; every tail sum is then a combination of
      Hurwitz zeta functions (`scipy.special.zeta`_), so normalizations,
      moments and tail probabilities are exact, and divergent moments are
      identified from the exponents instead of by truncation.

Divergent moments are returned as ``numpy.inf``.

.. include:: ../include/links.rst
"""
import warnings

import numpy
from scipy import special, stats

from ..util.inspect import subclass_registry


class DiscreteLaw:
    """
    Base class for the law of a nonnegative integer random variable.

    Derived classes must provide all of the methods below; the base class
    only provides the common derived quantities.
    """
    k_min = None
    """
    Smallest value in the support.
    """

    def pmf(self, k):
        """Probability of each value in ``k``."""
        raise NotImplementedError(f'pmf not defined for {self.__class__.__name__}.')

    def sf(self, k):
        """Probability that the variable is *at least* ``k``."""
        raise NotImplementedError(f'sf not defined for {self.__class__.__name__}.')

    def moment(self, a):
        r"""Return :math:`E[X^a]`; ``numpy.inf`` if it diverges."""
        raise NotImplementedError(f'moment not defined for {self.__class__.__name__}.')

    def truncated_moment(self, a, ell):
        r"""Return :math:`E[X^a\, 1\{X\leq\ell\}]`."""
        raise NotImplementedError(
                f'truncated_moment not defined for {self.__class__.__name__}.')

    def tail_moment(self, a, ell):
        r"""Return :math:`E[X^a\, 1\{X>\ell\}]`."""
        raise NotImplementedError(f'tail_moment not defined for {self.__class__.__name__}.')

    def factorial_moment(self, r):
        r"""Return :math:`E[X(X-1)\cdots(X-r+1)]`."""
        raise NotImplementedError(
                f'factorial_moment not defined for {self.__class__.__name__}.')

    def size_biased(self):
        """Return the size-biased law."""
        raise NotImplementedError(f'size_biased not defined for {self.__class__.__name__}.')

    def minus_one(self):
        """Return the law of the variable minus one."""
        raise NotImplementedError(f'minus_one not defined for {self.__class__.__name__}.')

    def sample(self, rng, size=None):
        """Draw from the law using the provided `numpy.random.Generator`_."""
        raise NotImplementedError(f'sample not defined for {self.__class__.__name__}.')

    @property
    def mean(self):
        return self.moment(1)

    def total_mass(self):
        """
        Total probability; equal to one up to rounding.
        """
        return float(self.sf(self.k_min))

    def tail_constants(self, exponent, k_max=10000):
        r"""
        Empirical constants bracketing the power-law tail of the law.

        Args:
            exponent (:obj:`float`):
                Expected tail exponent :math:`\alpha` in :math:`P(X\geq k)
                \asymp k^{-\alpha}`.
            k_max (:obj:`int`, optional):
                Largest :math:`k` included.

        Returns:
            :obj:`tuple`: The minimum and maximum of :math:`P(X\geq k)
            k^{\alpha}` over :math:`1\leq k\leq k_{\rm max}`.
        """
        k = numpy.arange(1, k_max+1)
        r = self.sf(k) * k.astype(float)**exponent
        return float(numpy.amin(r)), float(numpy.amax(r))


def _falling_factorial(k, r):
    out = numpy.ones_like(k, dtype=float)
    for j in range(r):
        out *= k - j
    return out


class TableLaw(DiscreteLaw):
    """
    Law defined by a probability table over consecutive integers.

    Args:
        k_min (:obj:`int`):
            Value of the first table entry.
        prob (array-like):
            Probabilities for ``k_min, k_min+1, ...``.  Normalized on input.
    """
    def __init__(self, k_min, prob):
        _prob = numpy.atleast_1d(numpy.asarray(prob, dtype=float))
        if _prob.size == 0 or numpy.any(_prob < 0) or not numpy.sum(_prob) > 0:
            raise ValueError('Probability table must be nonempty, nonnegative, and have '
                             'positive total mass.')
        # Trim zero-probability entries at the low end
        first = numpy.argmax(_prob > 0)
        self.k_min = int(k_min) + int(first)
        self.prob = _prob[first:] / numpy.sum(_prob[first:])
        self.k = self.k_min + numpy.arange(self.prob.size)
        self.k_max = int(self.k[-1])
        self.cdf = numpy.cumsum(self.prob)
        # Survival function at each table entry, P(X >= k)
        self._sf = numpy.cumsum(self.prob[::-1])[::-1]

    def pmf(self, k):
        _k = numpy.asarray(k)
        indx = (_k >= self.k_min) & (_k <= self.k_max)
        out = numpy.zeros(_k.shape, dtype=float)
        out[indx] = self.prob[(_k[indx] - self.k_min).astype(int)]
        return out

    def sf(self, k):
        _k = numpy.asarray(k)
        out = numpy.zeros(_k.shape, dtype=float)
        out[_k <= self.k_min] = 1.
        indx = (_k > self.k_min) & (_k <= self.k_max)
        out[indx] = self._sf[(_k[indx] - self.k_min).astype(int)]
        return out

    def moment(self, a):
        return float(numpy.sum(self.k.astype(float)**a * self.prob))

    def truncated_moment(self, a, ell):
        indx = self.k <= ell
        return float(numpy.sum(self.k[indx].astype(float)**a * self.prob[indx]))

    def tail_moment(self, a, ell):
        indx = self.k > ell
        return float(numpy.sum(self.k[indx].astype(float)**a * self.prob[indx]))

    def factorial_moment(self, r):
        return float(numpy.sum(_falling_factorial(self.k, r) * self.prob))

    def size_biased(self):
        mean = self.mean
        if not mean > 0:
            raise ValueError('Size-biased law undefined for a variable that is always 0.')
        return TableLaw(self.k_min, self.k * self.prob / mean)

    def minus_one(self):
        if self.k_min < 1:
            raise ValueError('Shifted law would have support below 0.')
        return TableLaw(self.k_min-1, self.prob)

    def sample(self, rng, size=None):
        u = rng.random(size)
        indx = numpy.searchsorted(self.cdf, u * self.cdf[-1], side='right')
        return self.k[numpy.minimum(indx, self.prob.size-1)]


class ZetaLaw(DiscreteLaw):
    r"""
    Law with power-law weights and an exact analytic tail.

    The variable is :math:`X = Y - s` with :math:`Y \geq y_{\rm min}` and

    .. math::

        P(Y = y) \propto w(y) = \sum_j c_j\, y^{-e_j}.

    Tail sums of :math:`w` are Hurwitz zeta functions.  Moments of
    :math:`X^a = (y-s)^a` are expanded in the binomial series
    :math:`\sum_i \binom{a}{i} (-s)^i y^{a-i}`, which converges for
    :math:`y > s`.  A moment diverges if and only if :math:`\min_j e_j - a
    \leq 1`.

    Probabilities below ``y_min + table_size`` are tabulated for inverse-CDF
    sampling; draws beyond the table invert the analytic tail by doubling
    and bisection, which is exact up to the integer cap ``2**52``.

    Args:
        exponents (array-like):
            Exponents :math:`e_j`; each must exceed 1.
        coeffs (array-like):
            Coefficients :math:`c_j`.
        y_min (:obj:`int`):
            Smallest :math:`y` in the support.
        shift (:obj:`int`, optional):
            Offset :math:`s` between :math:`Y` and :math:`X`.
        table_size (:obj:`int`, optional):
            Number of tabulated values.
    """
    y_cap = 2.**52

    def __init__(self, exponents, coeffs, y_min, shift=0, table_size=10000):
        self.exponents = numpy.atleast_1d(numpy.asarray(exponents, dtype=float))
        self.coeffs = numpy.atleast_1d(numpy.asarray(coeffs, dtype=float))
        if self.exponents.size != self.coeffs.size:
            raise ValueError('Number of exponents and coefficients must match.')
        if numpy.any(self.exponents <= 1):
            raise ValueError('All exponents must be larger than 1 for a normalizable law.')
        self.y_min = int(y_min)
        self.shift = int(shift)
        if self.y_min < 1 or self.y_min - self.shift < 0:
            raise ValueError('Support must start at y >= 1 and x >= 0.')
        self.k_min = self.y_min - self.shift
        self.norm = float(self._tail_sum(self.y_min))
        if not self.norm > 0:
            raise ValueError('Power-law weights have nonpositive total mass.')
        self.table_size = int(table_size)
        y = self.y_min + numpy.arange(self.table_size)
        self.prob = self.weights(y) / self.norm
        self.cdf = numpy.cumsum(self.prob)
        self.k = y - self.shift
        self.k_max = int(self.k[-1])

    def weights(self, y):
        """Unnormalized weights :math:`w(y)`."""
        _y = numpy.asarray(y, dtype=float)
        return numpy.sum(self.coeffs[:,None]
                            * numpy.power.outer(numpy.atleast_1d(_y), -self.exponents).T,
                         axis=0).reshape(_y.shape)

    def _tail_sum(self, y):
        """Unnormalized :math:`\\sum_{y'\\geq y} w(y')`."""
        _y = numpy.asarray(y, dtype=float)
        return numpy.sum(self.coeffs[:,None]
                            * special.zeta(self.exponents[:,None], numpy.atleast_1d(_y)[None,:]),
                         axis=0).reshape(_y.shape)

    def _diverges(self, a):
        return numpy.amin(self.exponents) - a <= 1

    def _power_sum(self, a, y_start, max_terms=400):
        r"""
        Unnormalized :math:`\sum_{y\geq y_{\rm start}} (y-s)^a w(y)`.
        """
        if self._diverges(a):
            return numpy.inf
        if a == 0:
            return float(self._tail_sum(y_start))
        # The y = s term is zero for a > 0; the binomial series converges
        # for y > s.
        y0 = float(max(y_start, self.shift+1))
        if self.shift == 0:
            return float(numpy.sum(self.coeffs * special.zeta(self.exponents - a, y0)))
        total = 0.
        integer_a = float(a).is_integer() and a >= 0
        for i in range(max_terms):
            c = special.binom(a, i) * (-self.shift)**i
            if c == 0:
                if integer_a and i > a:
                    break
                continue
            term = c * numpy.sum(self.coeffs * special.zeta(self.exponents - a + i, y0))
            total += term
            if i > a and abs(term) < 1e-17 * abs(total):
                break
        return float(total)

    def pmf(self, k):
        _k = numpy.asarray(k)
        out = numpy.zeros(_k.shape, dtype=float)
        indx = _k >= self.k_min
        out[indx] = self.weights(_k[indx] + self.shift) / self.norm
        return out

    def sf(self, k):
        _k = numpy.asarray(k)
        out = numpy.ones(_k.shape, dtype=float)
        indx = _k > self.k_min
        out[indx] = self._tail_sum(_k[indx] + self.shift) / self.norm
        return out

    def moment(self, a):
        return self._power_sum(a, self.y_min) / self.norm

    def truncated_moment(self, a, ell, chunk=1000000):
        if not numpy.isfinite(ell):
            return self.moment(a)
        if ell - self.k_min > 100*chunk and not self._diverges(a):
            return self.moment(a) - self.tail_moment(a, ell)
        y_end = int(ell) + self.shift
        total = 0.
        for start in range(self.y_min, y_end+1, chunk):
            y = numpy.arange(start, min(start+chunk, y_end+1), dtype=float)
            total += numpy.sum((y - self.shift)**a * self.weights(y))
        return float(total) / self.norm

    def tail_moment(self, a, ell):
        if self._diverges(a):
            raise ValueError(f'Tail moment of order {a} diverges; the law has tail exponent '
                             f'{numpy.amin(self.exponents)-1:.3f}.')
        return self._power_sum(a, max(int(ell)+1+self.shift, self.y_min)) / self.norm

    def factorial_moment(self, r):
        if r == 0:
            return 1.
        if self._diverges(r):
            return numpy.inf
        # Tabulated sum plus the analytic tail, expanding the falling factorial
        # in powers of x
        total = numpy.sum(_falling_factorial(self.k, r) * self.prob)
        coef = numpy.polynomial.polynomial.polyfromroots(numpy.arange(r))
        total += sum(c * self.tail_moment(m, self.k_max) for m, c in enumerate(coef) if c != 0)
        return float(total)

    def size_biased(self):
        if self._diverges(1):
            raise ValueError('Size-biased law undefined for a variable with infinite mean.')
        # (y - s) w(y) = sum_j c_j y^(1-e_j) - s c_j y^(-e_j)
        terms = {}
        for e, c in zip(self.exponents, self.coeffs):
            terms[e-1] = terms.get(e-1, 0.) + c
            if self.shift != 0:
                terms[e] = terms.get(e, 0.) - self.shift * c
        exponents = numpy.array([e for e in terms.keys() if terms[e] != 0])
        coeffs = numpy.array([terms[e] for e in exponents])
        # Values with zero weight (x = 0) are dropped from the support
        y_min = max(self.y_min, self.shift+1)
        return ZetaLaw(exponents, coeffs, y_min, shift=self.shift, table_size=self.table_size)

    def minus_one(self):
        if self.k_min < 1:
            raise ValueError('Shifted law would have support below 0.')
        return ZetaLaw(self.exponents, self.coeffs, self.y_min, shift=self.shift+1,
                       table_size=self.table_size)

    def _invert_tail(self, v):
        """
        Smallest :math:`y` beyond the table with :math:`P(Y>y)\\leq v`.
        """
        target = v * self.norm
        lo = numpy.full(v.size, float(self.y_min + self.table_size - 1))
        hi = 2*lo
        while True:
            grow = (self._tail_sum(hi+1) > target) & (hi < self.y_cap)
            if not numpy.any(grow):
                break
            hi[grow] = numpy.minimum(2*hi[grow], self.y_cap)
        while True:
            active = hi - lo > 1
            if not numpy.any(active):
                break
            mid = numpy.floor((lo[active] + hi[active])/2)
            upper = self._tail_sum(mid+1) <= target[active]
            _lo = lo[active]
            _hi = hi[active]
            _hi[upper] = mid[upper]
            _lo[~upper] = mid[~upper]
            lo[active] = _lo
            hi[active] = _hi
        return hi

    def sample(self, rng, size=None):
        u = numpy.atleast_1d(rng.random(size))
        indx = numpy.searchsorted(self.cdf, u, side='right')
        k = numpy.empty(u.shape, dtype=numpy.int64)
        intable = indx < self.table_size
        k[intable] = self.k[indx[intable]]
        if not numpy.all(intable):
            y = self._invert_tail(1 - u[~intable])
            k[~intable] = y.astype(numpy.int64) - self.shift
        return k[0] if size is None else k


class DegreeModel:
    """
    Base class for root-degree distributions :math:`P=(p_k)`.

    Derived classes define :attr:`kind`, construct their law in
    :func:`_build_law`, and report their parameters in :func:`parameters`.
    Instances are immutable after construction.

    Raises:
        ValueError:
            Raised if the constructed law is not normalized or has an infinite
            mean.
    """
    kind = None
    """
    Name used to select the model in configuration files.
    """

    def __init__(self):
        self.law = self._build_law()
        if abs(self.law.total_mass() - 1) > 1e-12:
            raise ValueError(f'{self.__class__.__name__} law is not normalized.')
        self.mean = self.law.mean
        if not numpy.isfinite(self.mean):
            raise ValueError('Degree distributions must have a finite mean.')
        if self.law.pmf(1) >= 0.99:
            warnings.warn(f'P(D=1) = {float(self.law.pmf(1)):.4f}; random trees from this '
                          'model are nearly trivial.')

    def _build_law(self):
        raise NotImplementedError(f'_build_law not defined for {self.__class__.__name__}.')

    def parameters(self):
        """
        Return the model parameters as a dictionary.
        """
        raise NotImplementedError(f'parameters not defined for {self.__class__.__name__}.')

    def to_dict(self):
        """
        Return the model description used by :func:`make_model`.
        """
        return {'kind': self.kind, **self.parameters()}

    def __repr__(self):
        par = ', '.join([f'{k}={v}' for k, v in self.parameters().items()])
        return f'{self.__class__.__name__}({par})'

    @classmethod
    def from_dict(cls, spec):
        """
        Construct a model from its dictionary description.

        Args:
            spec (:obj:`dict`):
                Dictionary with the ``kind`` of model and its parameters; e.g.,
                ``{"kind": "power_law", "tau": 4.5, "k_min": 1}``.

        Returns:
            :class:`DegreeModel`: The constructed model.

        Raises:
            ValueError:
                Raised if the kind is not recognized or the parameters are
                invalid.
        """
        if not isinstance(spec, dict) or 'kind' not in spec:
            raise ValueError('Model description must be a dictionary with a "kind" entry.')
        registry = subclass_registry(cls, 'kind')
        if spec['kind'] not in registry:
            raise ValueError(f'Unknown model kind "{spec["kind"]}"; options are: '
                             f'{", ".join(sorted(registry.keys()))}.')
        par = {k: v for k, v in spec.items() if k != 'kind'}
        try:
            return registry[spec['kind']](**par)
        except TypeError as e:
            raise ValueError(f'Invalid parameters for {spec["kind"]}: {e}') from e

    def pmf(self, k):
        """Probability :math:`p_k`."""
        return self.law.pmf(k)

    def sf(self, k):
        """Probability :math:`P(D\\geq k)`."""
        return self.law.sf(k)

    def sample(self, rng, size=None):
        """Draw root degrees."""
        return self.law.sample(rng, size=size)

    def size_biased(self):
        """Law of :math:`D^*`."""
        return self.law.size_biased()

    def forward(self):
        """Construct the :class:`ForwardModel`."""
        return ForwardModel(self)

    def _forward_law(self):
        return self.law.size_biased().minus_one()

    def _forward_factorial_moments(self, law):
        return tuple(law.factorial_moment(r) for r in [1,2,3])


class Regular(DegreeModel):
    """
    Every vertex has degree ``d``.
    """
    kind = 'regular'
    def __init__(self, d):
        if int(d) != d or d < 1:
            raise ValueError('Regular degree must be an integer >= 1.')
        self.d = int(d)
        super().__init__()

    def _build_law(self):
        return TableLaw(self.d, [1.])

    def parameters(self):
        return {'d': self.d}

    def _forward_factorial_moments(self, law):
        k = self.d - 1
        return float(k), float(k*(k-1)), float(k*(k-1)*(k-2))


class Poisson(DegreeModel):
    r"""
    Poisson degrees with mean :math:`\lambda`.

    The :math:`k=0` atom is kept by default, so that :math:`E[D]=\lambda`.
    This is the one model whose support is not restricted to
    :math:`\{1,2,\ldots\}`: a root of degree 0 is isolated and has
    :math:`h=B`.  With ``truncate_zero=True``, the law is conditioned on
    :math:`D\geq 1`, which restores that support.  The forward law is
    Poisson(:math:`\lambda`) in both cases.
    """
    kind = 'poisson'
    def __init__(self, lam, truncate_zero=False):
        if not lam > 0 or not numpy.isfinite(lam):
            raise ValueError('Poisson mean must be positive and finite.')
        self.lam = float(lam)
        self.truncate_zero = bool(truncate_zero)
        super().__init__()

    def _build_law(self):
        k_max = int(numpy.ceil(self.lam + 40*numpy.sqrt(self.lam) + 40))
        k_min = 1 if self.truncate_zero else 0
        k = numpy.arange(k_min, k_max+1)
        return TableLaw(k_min, stats.poisson.pmf(k, self.lam))

    def parameters(self):
        par = {'lam': self.lam}
        if self.truncate_zero:
            par['truncate_zero'] = True
        return par

    def _forward_factorial_moments(self, law):
        return self.lam, self.lam**2, self.lam**3


class PowerLaw(DegreeModel):
    r"""
    Power-law degrees, :math:`p_k = k^{-\tau}/\zeta(\tau, k_{\rm min})` for
    :math:`k\geq k_{\rm min}`.

    Requires :math:`\tau>2` for a finite mean degree.  The forward law has
    :math:`\rho_{\geq k}\asymp k^{-(\tau-2)}`, so :math:`\nu` is finite only for
    :math:`\tau>3`.
    """
    kind = 'power_law'
    def __init__(self, tau, k_min=1):
        if not tau > 2:
            raise ValueError('Power-law exponent must be > 2 for a finite mean degree.')
        if int(k_min) != k_min or k_min < 1:
            raise ValueError('Minimum degree must be an integer >= 1.')
        self.tau = float(tau)
        self.k_min = int(k_min)
        super().__init__()

    def _build_law(self):
        return ZetaLaw([self.tau], [1.], self.k_min)

    def parameters(self):
        return {'tau': self.tau, 'k_min': self.k_min}


class Empirical(DegreeModel):
    """
    Degrees drawn from a user-provided probability mass function.

    Args:
        pmf (:obj:`dict`):
            Map of degree (integer >= 1) to probability.  Keys may be strings
            (as read from JSON).  Probabilities are renormalized, with a
            warning, if they do not sum to 1.
    """
    kind = 'empirical'
    def __init__(self, pmf):
        if not isinstance(pmf, dict) or len(pmf) == 0:
            raise ValueError('Empirical degree distribution must be a nonempty mapping.')
        _pmf = {}
        for k, p in pmf.items():
            if float(k) != int(float(k)) or int(float(k)) < 1:
                raise ValueError(f'Empirical degrees must be integers >= 1; found {k}.')
            if not p >= 0:
                raise ValueError(f'Empirical probabilities must be nonnegative; p_{k} = {p}.')
            _pmf[int(float(k))] = float(p)
        total = sum(_pmf.values())
        if not total > 0:
            raise ValueError('Empirical probabilities sum to zero.')
        if abs(total - 1) > 1e-12:
            warnings.warn(f'Empirical probabilities sum to {total}; renormalizing.')
        self.pmf_dict = {k: _pmf[k]/total for k in sorted(_pmf.keys())}
        super().__init__()

    def _build_law(self):
        k = numpy.array(list(self.pmf_dict.keys()))
        prob = numpy.zeros(numpy.amax(k) - numpy.amin(k) + 1, dtype=float)
        prob[k - numpy.amin(k)] = list(self.pmf_dict.values())
        return TableLaw(numpy.amin(k), prob)

    def parameters(self):
        return {'pmf': {str(k): p for k, p in self.pmf_dict.items()}}


class ForwardModel:
    r"""
    Forward (offspring) law :math:`\rho_k = (k+1)p_{k+1}/E[D]` of a degree
    model and its factorial moments.

    Args:
        parent (:class:`DegreeModel`):
            Root-degree model.

    Attributes:
        law (:class:`DiscreteLaw`):
            Law of :math:`K`.
        nu (:obj:`float`):
            :math:`\nu = E[K]`; ``numpy.inf`` if it diverges.
        nu2, nu3 (:obj:`float`):
            Second and third factorial moments of :math:`K`; ``numpy.inf``
            if they diverge.
    """
    def __init__(self, parent):
        self.parent = parent
        self.law = parent._forward_law()
        self.nu, self.nu2, self.nu3 = parent._forward_factorial_moments(self.law)

    def __repr__(self):
        return f'ForwardModel({self.parent!r})'

    @property
    def nu_finite(self):
        return bool(numpy.isfinite(self.nu))

    def pmf(self, k):
        r"""Probability :math:`\rho_k`."""
        return self.law.pmf(k)

    def sf(self, k):
        r"""Tail probability :math:`\rho_{\geq k}`."""
        return self.law.sf(k)

    def sample(self, rng, size=None):
        """Draw offspring counts."""
        return self.law.sample(rng, size=size)

    def size_biased(self):
        r"""
        Law of :math:`K^*`.

        Raises:
            ValueError:
                Raised if :math:`\nu=\infty`.
        """
        if not self.nu_finite:
            raise ValueError('Size-biased forward law is undefined when nu is infinite.')
        return self.law.size_biased()

    def factorial_moments(self):
        r"""Return :math:`(\nu, \nu_2, \nu_3)`."""
        return self.nu, self.nu2, self.nu3

    def tail_constants(self, k_max=10000):
        r"""
        Constants :math:`(c, C)` with :math:`c k^{-(\tau-2)} \leq
        \rho_{\geq k} \leq C k^{-(\tau-2)}` over :math:`1\leq k\leq k_{\rm
        max}`; only defined for :class:`PowerLaw` parents.
        """
        if not isinstance(self.parent, PowerLaw):
            raise TypeError('Tail constants are only defined for power-law degrees.')
        return self.law.tail_constants(self.parent.tau - 2, k_max=k_max)


def make_model(spec):
    """
    Construct a :class:`DegreeModel` from its description.

    Args:
        spec (:obj:`dict`, :class:`DegreeModel`):
            Model description (see :func:`DegreeModel.from_dict`).  Model
            instances are returned unchanged.

    Returns:
        :class:`DegreeModel`: The degree model.
    """
    return spec if isinstance(spec, DegreeModel) else DegreeModel.from_dict(spec)


def forward(model):
    """
    Construct the forward law of a degree model.
    """
    return model.forward()


def truncated_moment(fm, a, ell, tail=False):
    r"""
    Truncated moments of the forward degree :math:`K`.

    Args:
        fm (:class:`ForwardModel`):
            Forward law.
        a (:obj:`float`):
            Moment order; must be nonnegative.
        ell (:obj:`int`):
            Truncation level; must be at least 1.
        tail (:obj:`bool`, optional):
            Return :math:`E[K^a\,1\{K>\ell\}]` instead of
            :math:`E[K^a\,1\{K\leq\ell\}]`.

    Returns:
        :obj:`float`: The truncated moment.

    Raises:
        ValueError:
            Raised if the arguments are out of range or if the tail moment
            diverges (:math:`a\geq\tau-2` for power laws).
    """
    if a < 0:
        raise ValueError('Moment order must be nonnegative.')
    if ell < 1:
        raise ValueError('Truncation level must be at least 1.')
    return fm.law.tail_moment(a, ell) if tail else fm.law.truncated_moment(a, ell)


def sample_degree(model, rng, size=None):
    """Draw from the root-degree law :math:`D`."""
    return model.sample(rng, size=size)


def sample_forward(fm, rng, size=None):
    """Draw from the forward law :math:`K`."""
    return fm.sample(rng, size=size)


def sample_size_biased(dist, rng, size=None):
    """
    Draw from the size-biased law of a :class:`DegreeModel` (:math:`D^*`) or
    a :class:`ForwardModel` (:math:`K^*`).

    Raises:
        ValueError:
            Raised for forward models with :math:`\\nu=\\infty`.
    """
    return dist.size_biased().sample(rng, size=size)
