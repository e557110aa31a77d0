"""
Utility functions for modeling.

.. include:: ../include/links.rst
"""

import warnings

import numpy
from scipy import linalg, optimize, stats
from astropy.stats import jackknife_stats


def cov_err(jac):
    """
    Provided the Jacobian matrix from a least-squares minimization
    routine, construct the parameter covariance matrix. See e.g.
    Press et al. 2007, Numerical Recipes, 3rd ed., Section 15.4.2

    This is directly pulled from ppxf.capfit.cov_err, but only
    returns the covariance matrix:

    https://pypi.org/project/ppxf/

    Args:
        jac (`numpy.ndarray`_):
            Jacobian matrix

    Returns:
        `numpy.ndarray`_: Parameter covariance matrix.
    """
    U, s, Vh = linalg.svd(jac, full_matrices=False)
    w = s > numpy.spacing(s[0])*max(jac.shape)
    return (Vh[w].T/s[w]**2) @ Vh[w]


def fit_line(x, y, sig=None):
    """
    Weighted least-squares fit of a straight line, ``y = a + b x``.

    The fit is performed by `scipy.optimize.least_squares`_.  The parameter
    covariance is constructed from the Jacobian (see :func:`cov_err`) and
    scaled by the reduced chi-square of the fit, such that the errors
    reflect the observed scatter about the line.

    Args:
        x (`numpy.ndarray`_):
            Abscissa values.
        y (`numpy.ndarray`_):
            Ordinate values.
        sig (`numpy.ndarray`_, optional):
            Errors in ``y``.  If None or if any error is not positive, the
            fit is unweighted.

    Returns:
        :obj:`tuple`: Four objects: the best-fitting parameters ``(a,b)``, their
        covariance matrix, the weighted coefficient of determination, and the
        number of degrees of freedom.

    Raises:
        ValueError:
            Raised if fewer than three points are provided.
    """
    _x = numpy.asarray(x, dtype=float)
    _y = numpy.asarray(y, dtype=float)
    if _x.size < 3:
        raise ValueError('Line fits require at least three points.')
    if sig is None or numpy.any(numpy.logical_not(numpy.asarray(sig) > 0)):
        _sig = numpy.ones_like(_y)
    else:
        _sig = numpy.asarray(sig, dtype=float)

    def resid(p):
        return (_y - p[0] - p[1]*_x)/_sig

    def jac(p):
        return -numpy.column_stack((numpy.ones_like(_x), _x))/_sig[:,None]

    # Start from the unweighted solution
    p0 = numpy.polynomial.polynomial.polyfit(_x, _y, 1)
    result = optimize.least_squares(resid, p0, jac=jac, method='lm')
    dof = _x.size - 2
    chisqr = numpy.sum(result.fun**2)
    cov = cov_err(result.jac) * chisqr / dof

    wgt = 1/_sig**2
    ybar = numpy.sum(wgt*_y)/numpy.sum(wgt)
    sstot = numpy.sum(wgt*(_y-ybar)**2)
    rsqr = 1. if sstot == 0 else max(0., 1 - chisqr/sstot)
    return result.x, cov, rsqr, dof


def t_interval(value, err, dof, level=0.95):
    """
    Two-sided Student-t confidence interval about a value.
    """
    half = stats.t.ppf(0.5 + level/2, dof) * err
    return value - half, value + half


def transformed_interval(value, err, dof, transform, pole=None, level=0.95):
    r"""
    Map an estimate, its error, and its confidence interval through a
    transform.

    The transform must be monotone on either side of ``pole``.  If the
    interval excludes the pole, its end points are transformed directly.
    Otherwise the transformed interval is unbounded, and the error is
    propagated to first order instead, :math:`\sigma_f = |f'(x)|\sigma_x`,
    with a symmetric interval about :math:`f(x)`.

    Args:
        value (:obj:`float`):
            Estimate.
        err (:obj:`float`):
            Standard error of the estimate.
        dof (:obj:`int`):
            Degrees of freedom for the Student-t quantile.
        transform (callable):
            Function applied to the estimate.
        pole (:obj:`float`, optional):
            Singular point of the transform, if any.
        level (:obj:`float`, optional):
            Confidence level.

    Returns:
        :obj:`tuple`: The transformed estimate, its standard error, the
        interval as a sorted tuple, and the method used (``'transformed'``
        or ``'linearized'``).
    """
    lo, hi = t_interval(value, err, dof, level=level)
    estimate = transform(value)
    if pole is None or not lo <= pole <= hi:
        # The interval contains value +/- err, so neither end crosses the pole
        stderr = abs(transform(value+err) - transform(value-err))/2
        return estimate, stderr, tuple(sorted((transform(lo), transform(hi)))), 'transformed'
    step = 1e-6*max(abs(value), 1e-12)
    deriv = abs(transform(value+step) - transform(value-step))/(2*step)
    half = (hi - lo)/2
    return estimate, deriv*err, (estimate - deriv*half, estimate + deriv*half), 'linearized'


def block_means(samples, nblocks=100):
    """
    Split a sample into contiguous blocks and return the block means.

    Args:
        samples (`numpy.ndarray`_):
            1D sample.
        nblocks (:obj:`int`, optional):
            Number of blocks; reduced to the sample size if necessary.

    Returns:
        `numpy.ndarray`_: Mean of each block.
    """
    _samples = numpy.asarray(samples, dtype=float)
    nb = min(nblocks, _samples.size)
    return numpy.array([numpy.mean(b) for b in numpy.array_split(_samples, nb)])


def jackknife_mean(samples, nblocks=100):
    """
    Mean of a sample and its block-jackknife standard error.

    The error is computed by `astropy.stats.jackknife_stats`_ applied to the
    block means, which absorbs correlations shorter than the block length.

    Args:
        samples (`numpy.ndarray`_):
            1D sample.
        nblocks (:obj:`int`, optional):
            Number of blocks.

    Returns:
        :obj:`tuple`: The sample mean and its standard error.
    """
    _samples = numpy.asarray(samples, dtype=float)
    if _samples.size == 0:
        raise ValueError('Cannot compute the mean of an empty sample.')
    mean = numpy.mean(_samples)
    if _samples.size < 2 or numpy.all(_samples == _samples[0]):
        return mean, 0.
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', RuntimeWarning)
        _, _, se, _ = jackknife_stats(block_means(_samples, nblocks=nblocks), numpy.mean, 0.95)
    return mean, float(se)


def logcosh(x):
    r"""
    Compute :math:`\log\cosh(x)` without overflow.
    """
    _x = numpy.absolute(x)
    return _x + numpy.log1p(numpy.exp(-2*_x)) - numpy.log(2.)


def sech2(x):
    r"""
    Calculate the squared hyperbolic secant function using `numpy.cosh`_, while
    controlling for overflow errors.

    Overflow is assumed to occur whenever :math:`|x| \geq 100`; these values
    (including infinite fields) return 0.  This is the numerically safe form
    of :math:`1-\tanh^2(x)`.

    Args:
        x (array-like):
            Values at which to calculate :math:`{\rm sech}^2(x)`.

    Returns:
        `numpy.ndarray`_: Result of :math:`{\rm sech}^2(x)`.
    """
    _x = numpy.atleast_1d(numpy.asarray(x, dtype=float))
    indx = numpy.absolute(_x) < 100
    if numpy.all(indx):
        return 1/numpy.cosh(_x)**2
    s = numpy.zeros_like(_x)
    s[indx] = 1/numpy.cosh(_x[indx])**2
    return s


def edge_factor(beta, h):
    r"""
    Correlation decay factor contributed by one edge of a tree path.

    For an edge of coupling :math:`\beta` leading to a vertex whose pruned
    field is :math:`h`, this is

    .. math::

        \frac{\sinh 2\beta}{\cosh 2\beta + \cosh 2h} = \frac{\tanh\beta}{1 +
        \sinh^2 h / \cosh^2 \beta}.

    The right-hand form is used because it remains finite for large
    :math:`h` and saturated fields (:math:`h=\infty` gives 0).

    Args:
        beta (:obj:`float`):
            Inverse temperature.
        h (:obj:`float`, `numpy.ndarray`_):
            Pruned field(s).

    Returns:
        :obj:`float`, `numpy.ndarray`_: The decay factor(s).
    """
    return numpy.tanh(beta) * spine_weight(beta, h)


def spine_weight(beta, h):
    r"""
    Weight factor :math:`(1 + \sinh^2 h/\cosh^2\beta)^{-1}` of one spine
    vertex, which is in :math:`(0,1]` for every field.
    """
    with numpy.errstate(over='ignore'):
        x = numpy.square(numpy.sinh(h)) / numpy.cosh(beta)**2
    return 1/(1 + x)
