"""Two-sided confidence intervals from an estimator and its replicates.

The Wald interval only uses the influence-function based standard
deviation of the estimator. The four bootstrap intervals use the
replicates: percentile and percentile-t intervals are built from
deviations around the bootstrap center `T(eta_n, P-hat_n)`, Efron's
interval from the raw replicates, and the bootstrap-Wald interval from
the bootstrap mean squared deviation.

Quantiles are lower quantiles of the discrete replicate distribution,
i.e. the order statistic at rank `ceil(p B)`; there is no
interpolation.
"""

import dataclasses
import math

import numpy as np

from scipy.stats import norm

from .errors import DomainError
from .errors import StudentizationError


METHODS = ('wald', 'perc', 'perct', 'efron', 'bwald')


@dataclasses.dataclass(frozen=True)
class IntervalSpec:
    """Tail probabilities and construction method of an interval.

    Parameters
    ----------
    alpha : float
        Probability that the interval lies below the parameter

    beta : float
        Probability that the interval lies above the parameter

    method : str
        One of `wald`, `perc`, `perct`, `efron`, or `bwald`
    """

    alpha: float = 0.025
    beta: float = 0.025
    method: str = 'wald'

    def __post_init__(self):
        if not (0 < self.alpha < 1 and 0 < self.beta < 1):
            raise DomainError(
                f'Tail probabilities must lie in (0, 1), got {self.alpha}, {self.beta}'
            )

        if not self.alpha + self.beta < 1:
            raise DomainError(
                f'alpha + beta must be less than 1, got {self.alpha + self.beta}'
            )

        if self.method not in METHODS:
            raise DomainError(
                f'Unknown interval method {self.method!r}; expected one of {METHODS}'
            )

    @classmethod
    def equi_tailed(cls, level=0.95, method='wald'):
        """Create an equi-tailed specification of a given level."""
        if not 0 < level < 1:
            raise DomainError(f'Level must lie in (0, 1), got {level}')

        tail = (1.0 - level) / 2.0
        return cls(tail, tail, method)

    @property
    def level(self):
        """Return the nominal level `1 - alpha - beta`."""
        return 1.0 - self.alpha - self.beta


@dataclasses.dataclass(frozen=True)
class Interval:
    """Closed interval `[lo, hi]`."""

    lo: float
    hi: float

    def __post_init__(self):
        assert self.lo <= self.hi, f'Malformed interval [{self.lo}, {self.hi}]'

    @property
    def width(self):
        """Return the width of the interval."""
        return self.hi - self.lo

    def contains(self, value):
        """Check whether `value` lies in the interval."""
        return self.lo <= value <= self.hi

    def __iter__(self):
        return iter((self.lo, self.hi))


def lower_quantile(values, p):
    """Calculate the lower `p`-quantile of a discrete distribution.

    Parameters
    ----------
    values:
        Replicate values, all of them valid

    p : float
        Probability in `(0, 1]`

    Returns
    -------
    Smallest value `v` such that at least a fraction `p` of the values
    is less than or equal to `v`.
    """
    values = np.asarray(values, dtype=float)
    B = len(values)

    if B == 0:
        raise DomainError('Quantiles require at least one value')

    if not 0 < p <= 1:
        raise DomainError(f'Quantile probability must lie in (0, 1], got {p}')

    # Rounding first keeps products such as 0.5 * 4 at their exact rank.
    rank = math.ceil(round(p * B, 9))
    rank = min(max(rank, 1), B)

    return float(np.partition(values, rank - 1)[rank - 1])


def _z(p):
    return float(norm.ppf(p))


def wald(report, spec, n=None):
    """Calculate the Wald interval.

    Parameters
    ----------
    report : EstimatorReport
        Estimator on the original sample

    spec : IntervalSpec
        Tail probabilities

    n : int or None
        Sample size; defaults to the size of the report

    Returns
    -------
    `Interval` around the point estimate.
    """
    n = report.n if n is None else n
    scale = report.sigma_hat / math.sqrt(n)

    return Interval(
        report.psi_hat + _z(spec.beta) * scale,
        report.psi_hat + _z(1.0 - spec.alpha) * scale
    )


def percentile(report, reps, spec):
    """Calculate the bootstrap percentile interval.

    The deviations of the replicates are taken with respect to the
    center of the bootstrap world, which differs from the estimate for
    smooth bootstraps.
    """
    reps = reps.valid()
    deviations = reps.deviations()

    return Interval(
        report.psi_hat - lower_quantile(deviations, 1.0 - spec.alpha),
        report.psi_hat - lower_quantile(deviations, spec.beta)
    )


def percentile_t(report, reps, spec):
    """Calculate the bootstrap percentile-t interval.

    Raises
    ------
    StudentizationError
        If a valid replicate has a zero standard deviation
    """
    mask = reps.is_valid
    zero = np.flatnonzero(mask & (reps.sigma_star <= 0))

    if len(zero) > 0:
        raise StudentizationError(
            f'Bootstrap replicate {int(zero[0])} has zero standard deviation',
            replicate=int(zero[0])
        )

    reps = reps.valid()
    studentized = reps.deviations() / reps.sigma_star

    return Interval(
        report.psi_hat - lower_quantile(studentized, 1.0 - spec.alpha) * report.sigma_hat,
        report.psi_hat - lower_quantile(studentized, spec.beta) * report.sigma_hat
    )


def efron(reps, spec):
    """Calculate Efron's percentile interval from the raw replicates."""
    psi_star = reps.valid().psi_star

    return Interval(
        lower_quantile(psi_star, spec.beta),
        lower_quantile(psi_star, 1.0 - spec.alpha)
    )


def bootstrap_wald(report, reps, spec, n=None):
    """Calculate the Wald interval with a bootstrap standard deviation.

    The variance is the bootstrap mean of `n (psi*_b - center)^2`.
    """
    n = report.n if n is None else n
    reps = reps.valid()

    if reps.B < 2:
        raise DomainError('The bootstrap-Wald interval requires at least two replicates')

    sigma_bar = math.sqrt(float(np.mean(n * reps.deviations()**2)))
    scale = sigma_bar / math.sqrt(n)

    return Interval(
        report.psi_hat + _z(spec.beta) * scale,
        report.psi_hat + _z(1.0 - spec.alpha) * scale
    )


def construct(spec, report, reps=None, n=None):
    """Construct the interval selected by `spec.method`.

    Parameters
    ----------
    spec : IntervalSpec
        Tail probabilities and method

    report : EstimatorReport
        Estimator on the original sample

    reps : ReplicateSet or None
        Bootstrap replicates; not required for the Wald interval

    n : int or None
        Sample size; defaults to the size of the report

    Returns
    -------
    `Interval`
    """
    if spec.method == 'wald':
        return wald(report, spec, n)

    if reps is None:
        raise DomainError(f'Method {spec.method!r} requires bootstrap replicates')

    if spec.method == 'perc':
        return percentile(report, reps, spec)
    elif spec.method == 'perct':
        return percentile_t(report, reps, spec)
    elif spec.method == 'efron':
        return efron(reps, spec)

    return bootstrap_wald(report, reps, spec, n)
