"""
Fit the critical exponents of a degree model.
"""
import argparse

from . import add_common_args, load_config, output_file
from . import EXIT_SUCCESS, EXIT_FAILURE, EXIT_REJECTED
from ..models.criticality import FitRejected, fit_exponent_beta, fit_exponent_delta
from ..models.criticality import fit_exponent_gamma, gamma_prime_diagnostic
from ..util.fileio import provenance, write_json
from ..util.parallel import RandomStream

# Each fit has its own stream key, so a fit does not depend on which others run
fit_streams = {'beta': 0, 'delta': 1, 'gamma': 2, 'gamma_prime_lb': 3}


def add_args(parser):
    return add_common_args(parser)


def parse_args(options=None):
    parser = add_args(argparse.ArgumentParser(description='Critical-exponent fits.',
                                              formatter_class=argparse.ArgumentDefaultsHelpFormatter))
    return parser.parse_args() if options is None else parser.parse_args(options)


def run_fit(name, model, cfg, rng, verbose=False):
    """
    Run one exponent fit.

    Args:
        name (:obj:`str`):
            ``'beta'``, ``'delta'``, ``'gamma'``, or ``'gamma_prime_lb'``.
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Degree model.
        cfg (:class:`~ising_cavity.models.criticality.ExponentConfig`):
            Fit configuration.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Master stream.
        verbose (:obj:`bool`, optional):
            Show progress bars.

    Returns:
        :class:`~ising_cavity.models.criticality.ExponentFit`: The fit.
    """
    stream = rng.child(fit_streams[name])
    if name == 'beta':
        return fit_exponent_beta(model, cfg, stream, verbose=verbose)
    if name == 'delta':
        return fit_exponent_delta(model, cfg, stream, verbose=verbose)
    if name == 'gamma':
        return fit_exponent_gamma(model, cfg)
    if name == 'gamma_prime_lb':
        return gamma_prime_diagnostic(model, cfg, stream, verbose=verbose)
    raise ValueError(f'Unknown exponent fit: {name}')


def main(args):
    cfg = load_config(args)
    rng = RandomStream(cfg.seed)
    fits = []
    status = EXIT_SUCCESS
    for name in cfg.selected_fits:
        try:
            fit = run_fit(name, cfg.model, cfg.exponents, rng, verbose=args.verbose)
        except FitRejected as e:
            print(f'REJECTED: {e}')
            e.fit.report()
            fits += [{**e.fit.to_dict(), 'status': 'rejected', 'message': str(e)}]
            status = max(status, EXIT_REJECTED)
            continue
        except ValueError as e:
            # No finite transition, or an invalid window for this model
            print(f'FAILED: {name}: {e}')
            fits += [{'exponent': name, 'status': 'failed', 'message': str(e)}]
            status = max(status, EXIT_FAILURE) if status != EXIT_REJECTED else status
            continue
        fit.report()
        fits += [{**fit.to_dict(), 'status': 'accepted'}]

    write_json({'model': cfg.model.to_dict(), 'fits': fits, 'provenance': provenance(cfg)},
               output_file(cfg, 'exponents.json'), overwrite=args.overwrite)
    return status
