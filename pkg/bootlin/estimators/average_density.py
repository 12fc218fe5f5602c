"""Estimators of the average density value `psi(P) = int eta_P^2`.

The three constructions evaluated here are

    onestep       2 P_n eta_n - int eta_n^2
    plugin        int eta_n^2
    meanplugin    P_n eta_n

where the last one coincides with the estimating-equations estimator
of this parameter. The efficient influence function at a density `eta`
is `2 eta - 2 psi`; every construction uses it with its own estimate.
"""

import dataclasses
import enum
import functools
import math

import numpy as np

from ..density import fit as fit_density
from ..density import get_kernel
from ..density import parse_bandwidth_rule
from ..density import tmle_target
from ..density.kde import as_sample
from ..errors import DomainError
from ..representations import EstimatorReport


# Value of the parameter at the standard normal distribution.
PSI_STANDARD_NORMAL = 1.0 / (2.0 * math.sqrt(math.pi))


class Construction(enum.Enum):
    """Estimator construction for the average density value."""

    ONESTEP = 'onestep'
    PLUGIN = 'plugin'
    MEANPLUGIN = 'meanplugin'

    def __str__(self):
        return self.value


def parse_construction(text):
    """Convert a string identifier into a `Construction`."""
    if isinstance(text, Construction):
        return text

    try:
        return Construction(str(text).strip().lower())
    except ValueError:
        raise DomainError(
            f'Unknown construction {text!r}; expected one of '
            f'{[c.value for c in Construction]}'
        ) from None


def _combine(construction, mean_at_data, integral_of_square):
    """Evaluate a construction from its two building blocks."""
    if construction is Construction.ONESTEP:
        return 2.0 * mean_at_data - integral_of_square()
    elif construction is Construction.PLUGIN:
        return integral_of_square()
    else:
        return mean_at_data


def estimate(construction, density, sample):
    """Calculate the estimate of a construction.

    Parameters
    ----------
    construction : Construction or str
        Estimator construction

    density : DensityEstimate
        Fitted density nuisance

    sample:
        Sample whose empirical distribution enters the construction

    Returns
    -------
    Point estimate as a float.
    """
    construction = parse_construction(construction)
    return _combine(
        construction,
        density.mean_under_empirical(sample),
        density.integral_of_square
    )


def influence_values(density, psi_hat, sample):
    """Evaluate the influence function `2 eta(X_i) - 2 psi_hat`."""
    return 2.0 * density(as_sample(sample).points) - 2.0 * psi_hat


def sigma_if(if_values):
    """Calculate the influence-function based standard deviation.

    This is the square root of the *uncentred* second moment
    `P_n phi_n^2`, since the influence function has mean zero in the
    population.
    """
    if_values = np.asarray(if_values, dtype=float)
    if len(if_values) == 0:
        raise DomainError('Influence function values must not be empty')

    return math.sqrt(float(np.mean(if_values**2)))


def center_at(construction, density, scheme_density, sample):
    """Calculate `T(eta_n, P-hat_n)`, the center of the bootstrap world.

    Parameters
    ----------
    construction : Construction or str
        Estimator construction

    density : DensityEstimate
        Fitted density nuisance `eta_n`

    scheme_density : DensityEstimate or None
        Density of the smooth bootstrap sampling distribution, or
        `None` for the empirical bootstrap

    sample:
        Original sample

    Returns
    -------
    Centering value as a float.
    """
    construction = parse_construction(construction)

    if scheme_density is None:
        return estimate(construction, density, sample)

    if construction is Construction.PLUGIN:
        return density.integral_of_square()

    cross = density.cross_inner_product(scheme_density)
    if construction is Construction.ONESTEP:
        return 2.0 * cross - density.integral_of_square()
    else:
        return cross


@dataclasses.dataclass(frozen=True)
class NuisanceSpec:
    """Density nuisance estimation procedure.

    Parameters
    ----------
    kernel : str
        Kernel identifier

    bandwidth : BandwidthRule
        Bandwidth rule used on the original data

    tmle : bool
        If set, the kernel density estimate is targeted
    """

    kernel: str = 'gauss'
    bandwidth: object = 'sj'
    tmle: bool = False

    def __post_init__(self):
        get_kernel(self.kernel)
        object.__setattr__(self, 'bandwidth', parse_bandwidth_rule(self.bandwidth))

    def __str__(self):
        return f'{self.bandwidth}+tmle' if self.tmle else str(self.bandwidth)

    def fit(self, sample):
        """Fit the nuisance, selecting the bandwidth from the data.

        Returns
        -------
        Tuple of the fitted `DensityEstimate` and the `BandwidthChoice`.
        """
        choice = self.bandwidth.select(sample)
        return self.refit(sample, choice.h), choice

    def refit(self, sample, h):
        """Fit the nuisance with a frozen bandwidth `h`."""
        density = fit_density(sample, self.kernel, h)
        if self.tmle:
            density = tmle_target(density, sample)

        return density


def parse_nuisance(text, kernel='gauss'):
    """Parse a nuisance identifier such as `sj` or `under:sj:0.1+tmle`."""
    text = str(text).strip().lower()
    tmle = text.endswith('+tmle')
    if tmle:
        text = text[:-len('+tmle')]

    return NuisanceSpec(kernel=kernel, bandwidth=text, tmle=tmle)


@dataclasses.dataclass(frozen=True)
class DensityFit:
    """Fitted density nuisance together with cached evaluations."""

    sample: object
    density: object
    choice: object
    at_data: np.ndarray

    @functools.cached_property
    def square(self):
        """Return the integral of the squared density, computed once."""
        return self.density.integral_of_square()

    def integral_of_square(self):
        return self.square


class AverageDensity:
    """Average density value parameter with a given construction.

    This object bundles a construction with a nuisance procedure; it is
    the parameter object consumed by the bootstrap.
    """

    supports_smooth_bootstrap = True

    def __init__(self, construction, nuisance=None):
        """Create a new parameter.

        Parameters
        ----------
        construction : Construction or str
            Estimator construction

        nuisance : NuisanceSpec or None
            Nuisance procedure. Defaults to a Gaussian kernel density
            estimate with Sheather--Jones bandwidth.
        """
        self.construction = parse_construction(construction)
        self.nuisance = nuisance if nuisance is not None else NuisanceSpec()

    def __repr__(self):
        return f'AverageDensity({self.construction}, {self.nuisance})'

    @property
    def kernel(self):
        """Return the kernel of the density nuisance."""
        return get_kernel(self.nuisance.kernel)

    def fit(self, sample):
        """Fit the nuisance on the original sample."""
        sample = as_sample(sample)
        density, choice = self.nuisance.fit(sample)

        return DensityFit(sample, density, choice, density(sample.points))

    def estimate(self, fit):
        """Calculate the point estimate from a `DensityFit`."""
        return _combine(
            self.construction,
            float(np.mean(fit.at_data)),
            fit.integral_of_square
        )

    def report(self, fit, scheme_density=None):
        """Summarise the estimator on the original sample.

        Parameters
        ----------
        fit : DensityFit
            Fitted nuisance

        scheme_density : DensityEstimate or None
            Sampling density of a smooth bootstrap, if any

        Returns
        -------
        `EstimatorReport` of the estimator.
        """
        psi_hat = self.estimate(fit)
        if_values = 2.0 * fit.at_data - 2.0 * psi_hat

        if scheme_density is None:
            center = psi_hat
        else:
            center = center_at(
                self.construction, fit.density, scheme_density, fit.sample
            )

        return EstimatorReport(
            psi_hat=psi_hat,
            sigma_hat=sigma_if(if_values),
            center_at_sampling_dist=center,
            if_values=if_values,
            bandwidth=fit.density.bandwidth,
            bandwidth_fell_back=fit.choice.fell_back
        )

    def replicate(self, fit, boot, fixed):
        """Calculate one bootstrap replicate.

        Parameters
        ----------
        fit : DensityFit
            Nuisance fitted on the original sample

        boot : Sample
            Bootstrap sample

        fixed : bool
            If set, the original nuisance is reused; otherwise it is
            refitted on the bootstrap sample with the original
            bandwidth.

        Returns
        -------
        Tuple `(psi*, sigma*)`.
        """
        if fixed:
            density = fit.density

            # Resamples of the original data can reuse the density values
            # that were computed for the estimate itself.
            if boot.indices is not None:
                at_boot = fit.at_data[boot.indices]
            else:
                at_boot = density(boot.points)
        else:
            density = self.nuisance.refit(boot, fit.density.bandwidth)
            at_boot = density(boot.points)

        psi_star = _combine(
            self.construction,
            float(np.mean(at_boot)),
            density.integral_of_square if not fixed else fit.integral_of_square
        )

        return psi_star, sigma_if(2.0 * at_boot - 2.0 * psi_star)
