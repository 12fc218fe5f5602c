"""V-statistics and remainder terms of the average density value.

The functions in this module serve as independent oracles: they compute
double sums by brute force and population integrals under the standard
normal distribution either in closed form or by adaptive quadrature.
None of them is used by the estimators themselves.
"""

import dataclasses
import math

import numpy as np

from . import prng
from .density import get_kernel
from .density.kde import as_sample
from .density.kernels import GaussianKernel
from .errors import DomainError
from .errors import UnsupportedOperationError
from .estimators import PSI_STANDARD_NORMAL
from .estimators import estimate
from .utilities import adaptive_integral
from .utilities import normal_pdf


# Half-width of the interval that carries the mass of the standard
# normal distribution for quadrature purposes.
_POPULATION_RANGE = 12.0

_SYMMETRY_POINTS = 100
_SYMMETRY_TOL = 1e-10


@dataclasses.dataclass(frozen=True)
class SymKernelFn:
    """Symmetric function `f(x, y)` that is constant on the diagonal.

    Parameters
    ----------
    f:
        Vectorised function of two arguments

    tau : float
        Value of `f(x, x)`

    name : str
        Human-readable name

    variance : float or None
        If `f(x, y)` is the normal density of `x - y` with this variance,
        population integrals are available in closed form.
    """

    f: object
    tau: float
    name: str = 'f'
    variance: float = None

    def __post_init__(self):
        stream = prng.RngStream(0, (_SYMMETRY_POINTS,))
        x = 3.0 * prng.standard_normal(stream.derive(0), _SYMMETRY_POINTS)
        y = 3.0 * prng.standard_normal(stream.derive(1), _SYMMETRY_POINTS)

        if not np.allclose(self.f(x, y), self.f(y, x), rtol=0, atol=_SYMMETRY_TOL):
            raise DomainError(f'Function {self.name} is not symmetric')

        if not np.allclose(self.f(x, x), self.tau, rtol=0, atol=_SYMMETRY_TOL):
            raise DomainError(f'Function {self.name} is not constant on the diagonal')

    def __call__(self, x, y):
        return self.f(x, y)

    @classmethod
    def scaled_kernel(cls, kernel, h):
        """Create `f(x, y) = K_h(x - y)`."""
        kernel = get_kernel(kernel)
        variance = h**2 if isinstance(kernel, GaussianKernel) else None

        return cls(
            lambda x, y: kernel.scaled(np.subtract(x, y), h),
            tau=float(kernel.scaled(0.0, h)),
            name=f'K_h[{kernel.name}, h={h:g}]',
            variance=variance
        )

    @classmethod
    def convolved_kernel(cls, kernel, h):
        """Create `f(x, y) = (K * K)_h(x - y)`."""
        kernel = get_kernel(kernel)
        variance = 2.0 * h**2 if isinstance(kernel, GaussianKernel) else None

        return cls(
            lambda x, y: kernel.scaled_self_convolution(np.subtract(x, y), h),
            tau=float(kernel.scaled_self_convolution(0.0, h)),
            name=f'(K*K)_h[{kernel.name}, h={h:g}]',
            variance=variance
        )


def v_statistic(f, xs, ys):
    """Calculate `(1 / (|xs| |ys|)) sum_ij f(x_i, y_j)` exactly.

    Parameters
    ----------
    f : SymKernelFn
        Function of two arguments

    xs:
        First set of points

    ys:
        Second set of points

    Returns
    -------
    Mean of `f` over all pairs.
    """
    xs = np.asarray(xs, dtype=float).ravel()
    ys = np.asarray(ys, dtype=float).ravel()

    if len(xs) == 0 or len(ys) == 0:
        raise DomainError('V-statistics require non-empty samples')

    return float(np.mean(f(xs[:, None], ys[None, :])))


def diagonal_split(f, xs):
    """Split the V-statistic of `xs` into its diagonal and off-diagonal part.

    Returns
    -------
    Tuple `(tau / n, off_diagonal)` whose sum is `v_statistic(f, xs, xs)`.
    """
    xs = np.asarray(xs, dtype=float).ravel()
    n = len(xs)

    if n == 0:
        raise DomainError('V-statistics require non-empty samples')

    values = f(xs[:, None], xs[None, :])
    off_diagonal = (np.sum(values) - np.trace(values)) / n**2

    return f.tau / n, float(off_diagonal)


def _require_population(f, pop):
    if pop != 'std_normal':
        raise UnsupportedOperationError(
            f'Population {pop!r} is not supported; only std_normal is'
        )

    if f.variance is None:
        raise UnsupportedOperationError(
            f'No closed-form population integrals for {f.name}'
        )


def population_cross_term(f, xs, pop='std_normal'):
    """Calculate `V(P_n, P_0) = (1/n) sum_i int f(X_i, y) phi(y) dy`.

    For `f(x, y) = N(x - y; 0, s^2)`, the inner integral is the normal
    density `N(x; 0, 1 + s^2)`.
    """
    _require_population(f, pop)
    xs = np.asarray(xs, dtype=float)

    return float(np.mean(normal_pdf(xs, 1.0 + f.variance)))


def population_term(f, pop='std_normal'):
    """Calculate `V(P_0, P_0)`, which equals `N(0; 0, 2 + s^2)`."""
    _require_population(f, pop)
    return float(normal_pdf(0.0, 2.0 + f.variance))


def signed_v_integral(f, sample, pop='std_normal'):
    """Integrate `f` against the squared signed measure `P_n - P_0`.

    Parameters
    ----------
    f : SymKernelFn
        Either `K_h` or `(K * K)_h` of the Gaussian kernel

    sample:
        Sample defining `P_n`

    pop : str
        Population; only `std_normal` is supported

    Returns
    -------
    Value of `V(P_n, P_n) - 2 V(P_n, P_0) + V(P_0, P_0)`.
    """
    _require_population(f, pop)
    xs = as_sample(sample).points

    return (
        v_statistic(f, xs, xs)
        - 2.0 * population_cross_term(f, xs, pop)
        + population_term(f, pop)
    )


def _integration_range(density):
    lo, hi = density.support
    return min(lo, -_POPULATION_RANGE), max(hi, _POPULATION_RANGE)


def onestep_remainder(eta, pop='std_normal'):
    """Calculate `-int (eta - phi)^2`, the remainder of the one-step estimator.

    Parameters
    ----------
    eta : DensityEstimate
        Density nuisance

    pop : str
        Population; only `std_normal` is supported

    Returns
    -------
    Nonpositive remainder, computed by adaptive quadrature.
    """
    if pop != 'std_normal':
        raise UnsupportedOperationError(
            f'Population {pop!r} is not supported; only std_normal is'
        )

    lo, hi = _integration_range(eta)
    segments = max(1, int(math.ceil((hi - lo) / (4.0 * eta.bandwidth))))

    value = adaptive_integral(
        lambda x: float((eta(x) - normal_pdf(x))**2),
        lo, hi,
        segments=min(segments, 400)
    )

    return -value


def onestep_linearization_gap(eta, sample):
    """Calculate `T_1 - psi_0 - (P_n - P_0) phi_n` under the standard normal.

    The one-step estimate and the empirical mean of the influence
    function are computed from the sample; the population mean `P_0 eta`
    is computed by adaptive quadrature. By construction, this equals
    `onestep_remainder(eta)`.
    """
    sample = as_sample(sample)
    lo, hi = _integration_range(eta)
    segments = max(1, int(math.ceil((hi - lo) / (4.0 * eta.bandwidth))))

    t_1 = estimate('onestep', eta, sample)
    psi_eta = eta.integral_of_square()

    p_n_phi = 2.0 * eta.mean_under_empirical(sample) - 2.0 * psi_eta
    p_0_phi = 2.0 * adaptive_integral(
        lambda x: float(eta(x) * normal_pdf(x)),
        lo, hi,
        segments=min(segments, 400)
    ) - 2.0 * psi_eta

    return t_1 - PSI_STANDARD_NORMAL - (p_n_phi - p_0_phi)


def plugin_bias_term(eta, sample):
    """Calculate `int eta^2 - P_n eta` on the fitting sample of `eta`."""
    sample = as_sample(sample)

    if not np.array_equal(eta.sample.points, sample.points):
        raise DomainError('The bias term requires the fitting sample of the density')

    return eta.integral_of_square() - eta.mean_under_empirical(sample)


def plugin_bias_double_sum(kernel, h, sample):
    """Calculate `(1/n^2) sum_ij [(K * K)_h - K_h](X_i - X_j)` by brute force."""
    kernel = get_kernel(kernel)
    xs = as_sample(sample).points

    def g(x, y):
        d = np.subtract(x, y)
        return kernel.scaled_self_convolution(d, h) - kernel.scaled(d, h)

    return float(np.mean(g(xs[:, None], xs[None, :])))


def expected_plugin_bias(kernel, h, n):
    """Calculate the expectation of `plugin_bias_term` under the standard normal.

    With `g = (K * K)_h - K_h`, the expectation equals
    `g(0) / n + (1 - 1/n) E g(X_1 - X_2)`, where `X_1 - X_2 ~ N(0, 2)`.
    """
    kernel = get_kernel(kernel)

    if not isinstance(kernel, GaussianKernel):
        raise UnsupportedOperationError(
            f'No closed-form plug-in bias for kernel {kernel.name!r}'
        )

    if n < 1:
        raise DomainError(f'Sample size must be positive, got {n}')

    at_zero = float(normal_pdf(0.0, 2.0 * h**2) - normal_pdf(0.0, h**2))
    off_diagonal = float(normal_pdf(0.0, 2.0 + 2.0 * h**2) - normal_pdf(0.0, 2.0 + h**2))

    return at_zero / n + (1.0 - 1.0 / n) * off_diagonal
