"""Kernel functions of declared order.

Two kernels are available: the Gaussian kernel of order two and the
fourth-order kernel `(3/2 - u^2/2) phi(u)` built from it. Both have
closed-form self-convolutions. Only the Gaussian kernel is a density,
so only it can be sampled, which is what the smooth bootstrap needs.
"""

import numpy as np

from .. import prng
from ..errors import DomainError
from ..errors import UnsupportedOperationError
from ..utilities import normal_pdf


class Kernel:
    """Symmetric kernel function of a given order.

    Subclasses implement `__call__`, and optionally `self_convolution`
    and `sample_noise`. Kernels are immutable and can be shared freely.
    """

    name = None
    order = None
    supports_sampling = False

    def __call__(self, u):
        """Evaluate the (unscaled) kernel at `u`."""
        raise NotImplementedError

    def scaled(self, u, h):
        """Evaluate the scaled kernel `K(u / h) / h`."""
        return self(np.asarray(u, dtype=float) / h) / h

    def self_convolution(self, u):
        """Evaluate `(K * K)(u)`, the convolution of the kernel with itself.

        Raises `UnsupportedOperationError` if the kernel does not
        register a closed form.
        """
        raise UnsupportedOperationError(
            f'Kernel {self.name!r} has no registered self-convolution'
        )

    def scaled_self_convolution(self, u, h):
        """Evaluate the convolution of the scaled kernel with itself."""
        return self.self_convolution(np.asarray(u, dtype=float) / h) / h

    def sample_noise(self, stream, n):
        """Draw `n` variates with density `K`.

        Parameters
        ----------
        stream : RngStream
            Stream to draw from

        n : int
            Number of draws
        """
        raise UnsupportedOperationError(
            f'Kernel {self.name!r} is a signed kernel and not a '
            'probability density, so it cannot be sampled'
        )

    def __repr__(self):
        """Return the identifier of the kernel."""
        return f'{type(self).__name__}({self.name!r})'


class GaussianKernel(Kernel):
    """The standard normal density, a second-order kernel."""

    name = 'gauss'
    order = 2
    supports_sampling = True

    def __call__(self, u):
        return normal_pdf(u)

    def self_convolution(self, u):
        # N(0, 1) * N(0, 1) = N(0, 2)
        return normal_pdf(u, variance=2.0)

    def sample_noise(self, stream, n):
        return prng.standard_normal(stream, n)


class GaussianFourthOrderKernel(Kernel):
    """The fourth-order kernel `(3/2 - u^2/2) phi(u)`.

    This kernel takes negative values for `|u| > sqrt(3)`.
    """

    name = 'gauss4'
    order = 4
    supports_sampling = False

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        return (1.5 - 0.5 * u**2) * normal_pdf(u)

    def self_convolution(self, u):
        # Writing phi(t) phi(u - t) = phi_2(u) phi_{1/2}(t - u/2), the
        # convolution is phi_2(u) times the expectation of the product
        # of both polynomial factors under T ~ N(u/2, 1/2).
        u = np.asarray(u, dtype=float)
        c = 1.5 - u**2 / 8.0
        return normal_pdf(u, variance=2.0) * (c**2 - 0.5 * c + 3.0 / 16.0 - u**2 / 8.0)


GAUSSIAN = GaussianKernel()
GAUSSIAN_FOURTH_ORDER = GaussianFourthOrderKernel()

KERNELS = {
    GAUSSIAN.name: GAUSSIAN,
    GAUSSIAN_FOURTH_ORDER.name: GAUSSIAN_FOURTH_ORDER,
}


def get_kernel(name):
    """Look up a kernel by its identifier, i.e. `gauss` or `gauss4`."""
    if isinstance(name, Kernel):
        return name

    try:
        return KERNELS[name]
    except KeyError:
        raise DomainError(
            f'Unknown kernel {name!r}; expected one of {sorted(KERNELS)}'
        ) from None
