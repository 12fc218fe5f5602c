"""Kernel density estimates and their integrals.

A `DensityEstimate` is immutable after fitting. Its integrals are
computed from exact double sums whenever the kernel provides a closed
form convolution; fluctuated (targeted) estimates fall back to
composite Gauss--Legendre quadrature on their support.
"""

import collections.abc
import dataclasses
import functools

import numpy as np

from scipy.integrate import cumulative_trapezoid
from scipy.spatial.distance import pdist

from ..errors import DomainError
from ..utilities import PanelRule
from ..utilities import normal_pdf
from ..utilities import panel_integral
from .kernels import GaussianKernel
from .kernels import get_kernel


# Number of kernel evaluations per chunk of a double sum. This only
# bounds memory; the result does not depend on it.
_CHUNK_SIZE = 2**22

# Multiple of the bandwidth by which the support of an estimate extends
# beyond the data.
SUPPORT_WIDTH = 10.0

# Number of grid points of tabulated distribution functions.
CDF_GRID_SIZE = 4096


class Sample(collections.abc.Sequence):
    """Independent sample of one-dimensional observations.

    Resamples keep the indices of the observations they were drawn
    from; this allows reusing quantities computed on the original data.
    """

    def __init__(self, points, indices=None):
        """Create a new sample.

        Parameters
        ----------
        points:
            Observations. Must be finite and non-empty.

        indices:
            Optional indices into a parent sample from which the
            observations were drawn.
        """
        points = np.array(points, dtype=float).ravel()

        if len(points) < 1:
            raise DomainError('A sample requires at least one observation')

        if not np.all(np.isfinite(points)):
            raise DomainError('A sample must only contain finite values')

        points.setflags(write=False)

        self._points = points
        self._indices = indices

    def __len__(self):
        """Return the number of observations."""
        return len(self._points)

    def __getitem__(self, index):
        """Return the observation at the given index."""
        return self._points[index]

    def __repr__(self):
        return f'Sample(n={self.n})'

    @property
    def points(self):
        """Return the observations as a read-only array."""
        return self._points

    @property
    def n(self):
        """Return the number of observations."""
        return len(self._points)

    @property
    def indices(self):
        """Return the parent indices of a resample, or `None`."""
        return self._indices

    def take(self, indices):
        """Return the resample consisting of the given observations."""
        indices = np.asarray(indices)
        return Sample(self._points[indices], indices=indices)

    def shift(self, c):
        """Return the sample translated by `c`."""
        return Sample(self._points + c)


def as_sample(sample):
    """Convert array-like data into a `Sample`, if required."""
    if isinstance(sample, Sample):
        return sample

    return Sample(sample)


def pair_sum(points, func):
    """Calculate the double sum of `func(X_i - X_j)` over all pairs.

    The function must be even. Only the upper triangle is evaluated;
    the diagonal contributes `n func(0)`.
    """
    n = len(points)
    diagonal = n * float(func(np.zeros(1))[0])

    if n < 2:
        return diagonal

    return diagonal + 2.0 * float(np.sum(func(pdist(points[:, None]))))


def outer_sum(xs, ys, func):
    """Calculate the double sum of `func(x_i - y_j)` over all pairs."""
    rows = max(1, _CHUNK_SIZE // max(len(ys), 1))
    total = 0.0

    for start in range(0, len(xs), rows):
        chunk = xs[start:start + rows]
        total += float(np.sum(func(np.subtract.outer(chunk, ys))))

    return total


@dataclasses.dataclass(frozen=True)
class FluctuationStep:
    """One exponential-tilt step of a targeted density.

    The step maps a density `eta` to `eta exp(2 epsilon eta) / normalizer`.
    `anchor_psi` records the value of the parameter at the density that
    anchored the efficient score of this step.
    """

    epsilon: float
    normalizer: float
    anchor_psi: float

    def apply(self, values):
        """Apply the step to density values."""
        return values * np.exp(2.0 * self.epsilon * values) / self.normalizer


class DensityEstimate:
    """Kernel density estimate, optionally fluctuated by targeting.

    The estimate is `(1/n) sum_i K_h(x - X_i)`; every fluctuation step
    is applied to it in order.
    """

    def __init__(self, sample, kernel, bandwidth, fluctuation=()):
        """Create a new density estimate.

        Parameters
        ----------
        sample : Sample
            Fitting sample

        kernel : Kernel or str
            Kernel or its identifier

        bandwidth : float
            Positive bandwidth

        fluctuation : tuple of FluctuationStep
            Targeting steps applied to the kernel density estimate
        """
        if not bandwidth > 0:
            raise DomainError(f'Bandwidth must be positive, got {bandwidth}')

        self._sample = as_sample(sample)
        self._kernel = get_kernel(kernel)
        self._bandwidth = float(bandwidth)
        self._fluctuation = tuple(fluctuation)

    def __repr__(self):
        return (
            f'DensityEstimate(n={self._sample.n}, kernel={self._kernel.name!r}, '
            f'h={self._bandwidth:g}, steps={len(self._fluctuation)})'
        )

    @property
    def sample(self):
        """Return the fitting sample."""
        return self._sample

    @property
    def kernel(self):
        """Return the kernel."""
        return self._kernel

    @property
    def bandwidth(self):
        """Return the bandwidth."""
        return self._bandwidth

    @property
    def fluctuation(self):
        """Return the targeting steps, which may be empty."""
        return self._fluctuation

    @property
    def is_targeted(self):
        """Check whether the estimate carries targeting steps."""
        return len(self._fluctuation) > 0

    @property
    def support(self):
        """Return the interval outside of which the estimate is negligible."""
        points = self._sample.points
        width = SUPPORT_WIDTH * self._bandwidth
        return float(points.min() - width), float(points.max() + width)

    @property
    def supports_sampling(self):
        """Check whether the estimate is a proper density one can sample."""
        return self._kernel.supports_sampling

    @functools.cached_property
    def quadrature_rule(self):
        """Return the Gauss--Legendre rule covering the support."""
        lo, hi = self.support
        return PanelRule(lo, hi, self._bandwidth / 4.0)

    @functools.cached_property
    def inverse_cdf_table(self):
        """Return a tabulated distribution function for inverse-CDF sampling.

        The table consists of `CDF_GRID_SIZE` equally-spaced points on the
        support and the normalised cumulative trapezoidal integral of the
        estimate at these points.
        """
        lo, hi = self.support
        grid = np.linspace(lo, hi, CDF_GRID_SIZE)
        cdf = cumulative_trapezoid(np.maximum(self(grid), 0.0), grid, initial=0.0)

        return grid, cdf / cdf[-1]

    def with_fluctuation(self, step):
        """Return a new estimate with an additional targeting step."""
        return DensityEstimate(
            self._sample,
            self._kernel,
            self._bandwidth,
            self._fluctuation + (step,)
        )

    def unfluctuated(self):
        """Return the underlying kernel density estimate."""
        return DensityEstimate(self._sample, self._kernel, self._bandwidth)

    def kde(self, x):
        """Evaluate the kernel density estimate without fluctuation."""
        x = np.asarray(x, dtype=float)
        points = self._sample.points
        h = self._bandwidth

        flat = x.ravel()
        values = np.empty_like(flat)
        rows = max(1, _CHUNK_SIZE // len(points))

        for start in range(0, len(flat), rows):
            chunk = flat[start:start + rows]
            values[start:start + rows] = np.mean(
                self._kernel.scaled(np.subtract.outer(chunk, points), h),
                axis=1
            )

        return values.reshape(x.shape)

    def __call__(self, x):
        """Evaluate the estimate at `x`.

        Parameters
        ----------
        x:
            Scalar or array of points

        Returns
        -------
        Density values with the same shape as `x`.
        """
        values = self.kde(x)
        for step in self._fluctuation:
            values = step.apply(values)

        return values

    def integral(self):
        """Integrate the estimate over its support by quadrature."""
        lo, hi = self.support
        return panel_integral(self, lo, hi, self._bandwidth / 4.0)

    def integral_of_square(self):
        """Calculate the integral of the squared estimate.

        Without fluctuation, this is the exact double sum
        `(1/n^2) sum_ij (K * K)_h(X_i - X_j)`. Otherwise, the integral
        is evaluated by quadrature.
        """
        if not self.is_targeted:
            n = self._sample.n
            h = self._bandwidth
            kernel = self._kernel

            total = pair_sum(
                self._sample.points,
                lambda d: kernel.scaled_self_convolution(d, h)
            )
            return total / n**2

        lo, hi = self.support
        return panel_integral(
            lambda x: self(x)**2, lo, hi, self._bandwidth / 4.0
        )

    def mean_under_empirical(self, sample):
        """Calculate the mean of the estimate under an empirical distribution.

        Parameters
        ----------
        sample : Sample
            Sample whose empirical distribution is used. This does not
            have to be the fitting sample.

        Returns
        -------
        Value of `(1/m) sum_i eta(Y_i)`.
        """
        return float(np.mean(self(as_sample(sample).points)))

    def cross_inner_product(self, other):
        """Calculate the integral of the product of two estimates.

        Two Gaussian kernel density estimates are handled by a closed
        form, since the convolution of two normal densities is normal.
        Estimates with the same kernel and bandwidth use the kernel's
        self-convolution; all other cases use quadrature.
        """
        a, b = self, other

        if not a.is_targeted and not b.is_targeted:
            xs, ys = a.sample.points, b.sample.points
            scale = 1.0 / (len(xs) * len(ys))

            if isinstance(a.kernel, GaussianKernel) and isinstance(b.kernel, GaussianKernel):
                variance = a.bandwidth**2 + b.bandwidth**2
                return scale * outer_sum(
                    xs, ys, lambda d: normal_pdf(d, variance)
                )

            if a.kernel is b.kernel and a.bandwidth == b.bandwidth:
                return scale * outer_sum(
                    xs, ys,
                    lambda d: a.kernel.scaled_self_convolution(d, a.bandwidth)
                )

        lo = min(a.support[0], b.support[0])
        hi = max(a.support[1], b.support[1])
        width = min(a.bandwidth, b.bandwidth) / 4.0

        return panel_integral(lambda x: a(x) * b(x), lo, hi, width)


def fit(sample, kernel, h):
    """Fit a kernel density estimate.

    Parameters
    ----------
    sample:
        Sample or array of observations

    kernel : Kernel or str
        Kernel or its identifier

    h : float
        Positive bandwidth

    Returns
    -------
    Fitted `DensityEstimate`.
    """
    if not h > 0:
        raise DomainError(f'Bandwidth must be positive, got {h}')

    return DensityEstimate(as_sample(sample), kernel, h)
