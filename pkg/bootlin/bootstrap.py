"""Bootstrap sampling schemes and replicate generation.

Two sampling schemes are available. The empirical bootstrap resamples
the observations with replacement. The smooth bootstrap samples from a
density estimate; for a kernel density estimate this amounts to
perturbing a resampled observation by scaled kernel noise, whereas
targeted densities are sampled by inverting their tabulated
distribution function.

The nuisance of every replicate is either refitted on the bootstrap
data, with tuning parameters frozen at the values selected on the
original data, or fixed at the original fit.
"""

import dataclasses
import enum
import logging
import math
import warnings

import numpy as np

from joblib import Parallel
from joblib import delayed

from . import prng
from .density import Sample
from .density import get_kernel
from .errors import BootlinError
from .errors import DegenerateIntervalWarning
from .errors import DomainError
from .errors import ReplicateFailureError
from .errors import UnsupportedOperationError
from .estimators import Construction
from .estimators import parse_nuisance
from .representations import ReplicateSet


logger = logging.getLogger(__name__)

# Largest fraction of failed replicates that is tolerated.
MAX_FAILURE_RATE = 0.01


@dataclasses.dataclass(frozen=True)
class BootstrapScheme:
    """Bootstrap sampling distribution.

    Parameters
    ----------
    kind : str
        Either `empirical` or `smooth`

    source : NuisanceSpec or None
        For the smooth bootstrap, the density procedure whose estimate
        is sampled. If `None`, the fitted nuisance itself is sampled.
    """

    kind: str = 'empirical'
    source: object = None

    def __post_init__(self):
        if self.kind not in ('empirical', 'smooth'):
            raise DomainError(f'Unknown bootstrap scheme {self.kind!r}')

        if self.kind == 'empirical' and self.source is not None:
            raise DomainError('The empirical bootstrap takes no density source')

    @property
    def is_smooth(self):
        """Check whether this is a smooth bootstrap."""
        return self.kind == 'smooth'

    def __str__(self):
        if self.source is None:
            return self.kind

        return f'smooth:{self.source}'


EMPIRICAL = BootstrapScheme('empirical')
SMOOTH = BootstrapScheme('smooth')


def parse_scheme(text, kernel='gauss'):
    """Parse `empirical`, `smooth`, or `smooth:RULE[+tmle]`."""
    if isinstance(text, BootstrapScheme):
        return text

    text = str(text).strip().lower()
    if text == 'empirical':
        return EMPIRICAL
    elif text == 'smooth':
        return SMOOTH
    elif text.startswith('smooth:'):
        return BootstrapScheme('smooth', parse_nuisance(text[len('smooth:'):], kernel))

    raise DomainError(f'Unknown bootstrap scheme {text!r}')


class NuisancePolicy(enum.Enum):
    """Construction of the bootstrap nuisance."""

    REFIT = 'refit'
    FIXED = 'fixed'

    def __str__(self):
        return self.value


def parse_policy(text):
    """Convert a string identifier into a `NuisancePolicy`."""
    if isinstance(text, NuisancePolicy):
        return text

    try:
        return NuisancePolicy(str(text).strip().lower())
    except ValueError:
        raise DomainError(f'Unknown nuisance policy {text!r}') from None


def scheme_density(scheme, param, fit):
    """Return the sampling density of a scheme, or `None` if empirical.

    Parameters
    ----------
    scheme : BootstrapScheme
        Sampling scheme

    param:
        Parameter object, e.g. `AverageDensity`

    fit:
        Nuisance fitted on the original sample

    Returns
    -------
    `DensityEstimate` to sample from, or `None`.
    """
    if not scheme.is_smooth:
        return None

    if not param.supports_smooth_bootstrap:
        raise UnsupportedOperationError(
            f'The smooth bootstrap is not available for {param!r}'
        )

    if scheme.source is None:
        density = fit.density
    else:
        density, _ = scheme.source.fit(fit.sample)

    if not density.supports_sampling:
        raise UnsupportedOperationError(
            f'Kernel {density.kernel.name!r} is a signed kernel; the smooth '
            'bootstrap requires a nonnegative density'
        )

    return density


def validate_configuration(param, scheme):
    """Reject inconsistent combinations of parameter and scheme early."""
    if not scheme.is_smooth:
        return

    if not param.supports_smooth_bootstrap:
        raise UnsupportedOperationError(
            f'The smooth bootstrap is not available for {param!r}'
        )

    kernel = param.kernel
    if scheme.source is not None:
        kernel = get_kernel(scheme.source.kernel)

    if not kernel.supports_sampling:
        raise UnsupportedOperationError(
            f"Kernel '{kernel.name}' is a signed kernel; the smooth "
            'bootstrap requires a nonnegative density'
        )


def draw_bootstrap_sample(scheme, sample, density, stream):
    """Draw a single bootstrap sample.

    Parameters
    ----------
    scheme : BootstrapScheme
        Sampling scheme

    sample:
        Original sample. Any object with `take` and `__len__` can be
        resampled empirically.

    density : DensityEstimate or None
        Sampling density of a smooth scheme

    stream : RngStream
        Stream of this replicate

    Returns
    -------
    Bootstrap sample of the same size as `sample`.
    """
    n = len(sample)

    if not scheme.is_smooth:
        indices = prng.categorical_uniform(stream.derive(prng.INDICES), n, n)
        return sample.take(indices)

    if not density.supports_sampling:
        raise UnsupportedOperationError(
            f'Kernel {density.kernel.name!r} is a signed kernel and cannot be sampled'
        )

    if not density.is_targeted:
        points = density.sample.points
        m = len(points)

        indices = prng.categorical_uniform(stream.derive(prng.INDICES), n, m)
        noise = density.kernel.sample_noise(stream.derive(prng.NOISE), n)

        return Sample(points[indices] + density.bandwidth * noise)

    grid, cdf = density.inverse_cdf_table
    u = prng.uniform01(stream.derive(prng.NOISE), n)

    return Sample(np.interp(u, cdf, grid))


def _replicate(param, fit, scheme, density, fixed, stream):
    try:
        boot = draw_bootstrap_sample(scheme, fit.sample, density, stream)
        psi_star, sigma_star = param.replicate(fit, boot, fixed)
    except (BootlinError, ValueError, np.linalg.LinAlgError) as error:
        logger.debug('Replicate %s failed: %s', stream.path, error)
        return math.nan, math.nan

    if not (math.isfinite(psi_star) and math.isfinite(sigma_star)):
        return math.nan, math.nan

    return psi_star, sigma_star


def run_replicates(param, sample, scheme, policy, B, stream, fit=None, n_jobs=1):
    """Generate bootstrap replicates of an estimator.

    Parameters
    ----------
    param:
        Parameter object, i.e. `AverageDensity` or `GComputation`

    sample:
        Original sample

    scheme : BootstrapScheme or str
        Sampling scheme

    policy : NuisancePolicy or str
        Bootstrap nuisance policy

    B : int
        Number of replicates

    stream : RngStream
        Stream of the bootstrap; replicate `b` uses its child `b`

    fit:
        Nuisance fitted on `sample`; fitted here if not provided

    n_jobs : int
        Number of worker threads

    Returns
    -------
    `ReplicateSet` with one entry per replicate. Failed replicates are
    stored as `NaN`.
    """
    if B < 1:
        raise DomainError(f'At least one replicate is required, got B = {B}')

    scheme = parse_scheme(scheme)
    policy = parse_policy(policy)
    validate_configuration(param, scheme)

    if fit is None:
        fit = param.fit(sample)

    density = scheme_density(scheme, param, fit)
    center = param.report(fit, density).center_at_sampling_dist
    fixed = policy is NuisancePolicy.FIXED

    if fixed and getattr(param, 'construction', None) is Construction.PLUGIN:
        warnings.warn(
            'A fixed nuisance makes every plug-in replicate equal to the '
            'original estimate; bootstrap intervals are degenerate',
            DegenerateIntervalWarning
        )

    results = Parallel(n_jobs=n_jobs, prefer='threads')(
        delayed(_replicate)(param, fit, scheme, density, fixed, stream.derive(b))
        for b in range(B)
    )

    psi_star, sigma_star = (np.array(column) for column in zip(*results))
    replicates = ReplicateSet(psi_star, sigma_star, center)

    if replicates.n_invalid > MAX_FAILURE_RATE * B:
        raise ReplicateFailureError(
            f'{replicates.n_invalid} of {B} bootstrap replicates failed',
            failures=replicates.n_invalid,
            total=B
        )

    if replicates.n_invalid > 0:
        logger.info('%d of %d replicates failed', replicates.n_invalid, B)

    return replicates
