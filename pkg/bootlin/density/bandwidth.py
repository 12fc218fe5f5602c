"""Bandwidth selection rules for kernel density estimators.

Rules are small immutable objects that are converted to and from their
string identifiers, which are used in configuration files, on the
command line, and in result tables:

    fixed:H            fixed bandwidth H
    silverman          Silverman's rule of thumb
    sj                 Sheather--Jones solve-the-equation plug-in
    under:BASE:EXP     bandwidth of rule BASE divided by n^EXP
"""

import dataclasses
import math
import warnings

import numpy as np

from scipy.optimize import brentq
from scipy.spatial.distance import pdist
from scipy.stats import iqr

from ..errors import BandwidthFallbackWarning
from ..errors import DegenerateDataError
from ..errors import DomainError
from ..errors import InsufficientDataError
from ..utilities import SQRT_2PI


@dataclasses.dataclass(frozen=True)
class BandwidthChoice:
    """Selected bandwidth together with selection metadata.

    Parameters
    ----------
    h : float
        Selected bandwidth

    fell_back : bool
        Set if a data-driven rule failed and Silverman's rule was used
        instead.
    """

    h: float
    fell_back: bool = False

    def __float__(self):
        return float(self.h)


def _points(sample):
    return np.asarray(getattr(sample, 'points', sample), dtype=float)


def _require_data(x):
    if len(x) < 3:
        raise InsufficientDataError(
            f'Data-driven bandwidth rules require n >= 3, got n = {len(x)}'
        )


def _scale(x, divisor):
    """Robust scale estimate `min(sd, IQR / divisor)`."""
    sd = np.std(x, ddof=1)
    a = min(sd, iqr(x) / divisor)

    # Heavily tied data can have a vanishing interquartile range; use
    # the standard deviation in this case.
    if a <= 0:
        a = sd

    if a <= 0:
        raise DegenerateDataError('Sample has zero spread')

    return a


def silverman(x):
    """Silverman's rule `0.9 min(sd, IQR / 1.34) n^(-1/5)`."""
    x = _points(x)
    _require_data(x)
    return 0.9 * _scale(x, 1.34) * len(x)**(-0.2)


def _phi4(distances, n, h):
    """Estimate the integrated squared second derivative of the density."""
    delta = (distances / h)**2
    term = np.exp(-0.5 * delta) * (delta**2 - 6.0 * delta + 3.0)

    # Off-diagonal pairs appear twice; the diagonal contributes 3 each.
    total = 2.0 * np.sum(term) + 3.0 * n
    return total / (n * (n - 1) * h**5 * SQRT_2PI)


def _phi6(distances, n, h):
    """Estimate the integrated squared third derivative of the density."""
    delta = (distances / h)**2
    term = np.exp(-0.5 * delta) * (delta**3 - 15.0 * delta**2 + 45.0 * delta - 15.0)
    total = 2.0 * np.sum(term) - 15.0 * n
    return total / (n * (n - 1) * h**7 * SQRT_2PI)


def sheather_jones(x):
    """Sheather--Jones solve-the-equation bandwidth for a Gaussian kernel.

    The pilot estimates use exact pair sums. The root is searched on
    `[h_S / 10, 10 h_S]` for Silverman's bandwidth `h_S`.

    Parameters
    ----------
    x:
        One-dimensional data

    Returns
    -------
    Selected bandwidth as a `BandwidthChoice`. If the equation has no
    root in the bracket, Silverman's bandwidth is returned, the flag
    `fell_back` is set, and a `BandwidthFallbackWarning` is issued.
    """
    x = _points(x)
    _require_data(x)

    n = len(x)
    h_silverman = silverman(x)
    scale = _scale(x, 1.349)
    distances = pdist(x[:, None])

    def _fall_back(reason):
        warnings.warn(
            f'Sheather-Jones did not converge ({reason}); '
            'using Silverman\'s rule instead.',
            BandwidthFallbackWarning
        )
        return BandwidthChoice(h_silverman, fell_back=True)

    a = 1.24 * scale * n**(-1.0 / 7.0)
    b = 1.23 * scale * n**(-1.0 / 9.0)

    sd_a = _phi4(distances, n, a)
    td_b = -_phi6(distances, n, b)

    if sd_a <= 0 or td_b <= 0:
        return _fall_back('non-positive pilot estimate')

    alpha2 = 1.357 * (sd_a / td_b)**(1.0 / 7.0)
    c1 = 1.0 / (2.0 * math.sqrt(math.pi) * n)

    def _equation(h):
        sd = _phi4(distances, n, alpha2 * h**(5.0 / 7.0))
        return (c1 / sd)**0.2 - h

    lo, hi = 0.1 * h_silverman, 10.0 * h_silverman

    with np.errstate(invalid='ignore', divide='ignore'):
        f_lo, f_hi = _equation(lo), _equation(hi)

        if not (np.isfinite(f_lo) and np.isfinite(f_hi)) or f_lo * f_hi > 0:
            return _fall_back('no sign change in bracket')

        try:
            h = brentq(_equation, lo, hi, xtol=1e-12 * h_silverman)
        except (ValueError, RuntimeError) as error:
            return _fall_back(str(error))

    return BandwidthChoice(h)


class BandwidthRule:
    """Base class of bandwidth rules."""

    def select(self, sample):
        """Select a bandwidth for `sample`; returns a `BandwidthChoice`."""
        raise NotImplementedError


@dataclasses.dataclass(frozen=True)
class Fixed(BandwidthRule):
    """Fixed, data-independent bandwidth."""

    h: float

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError(f'Fixed bandwidth must be positive, got {self.h}')

    def select(self, sample):
        return BandwidthChoice(float(self.h))

    def __str__(self):
        return f'fixed:{self.h:g}'


@dataclasses.dataclass(frozen=True)
class Silverman(BandwidthRule):
    """Silverman's rule of thumb."""

    def select(self, sample):
        return BandwidthChoice(silverman(sample))

    def __str__(self):
        return 'silverman'


@dataclasses.dataclass(frozen=True)
class SheatherJones(BandwidthRule):
    """Sheather--Jones solve-the-equation plug-in rule."""

    def select(self, sample):
        return sheather_jones(sample)

    def __str__(self):
        return 'sj'


@dataclasses.dataclass(frozen=True)
class Undersmoothed(BandwidthRule):
    """Bandwidth of a base rule divided by `n^exponent`."""

    base: BandwidthRule
    exponent: float = 0.1

    def __post_init__(self):
        if not self.exponent > 0:
            raise DomainError(
                f'Undersmoothing exponent must be positive, got {self.exponent}'
            )

    def select(self, sample):
        choice = self.base.select(sample)
        n = len(_points(sample))

        return BandwidthChoice(
            choice.h / n**self.exponent,
            fell_back=choice.fell_back
        )

    def __str__(self):
        return f'under:{self.base}:{self.exponent:g}'


def select_bandwidth(rule, sample):
    """Select a bandwidth according to `rule`.

    Parameters
    ----------
    rule : BandwidthRule or str
        Rule object or its string identifier

    sample:
        Sample or one-dimensional array of observations

    Returns
    -------
    `BandwidthChoice` with the bandwidth and its metadata.
    """
    return parse_bandwidth_rule(rule).select(sample)


def parse_bandwidth_rule(text):
    """Convert a string identifier into a `BandwidthRule`."""
    if isinstance(text, BandwidthRule):
        return text

    text = str(text).strip().lower()

    if text == 'silverman':
        return Silverman()
    elif text in ('sj', 'sheather-jones'):
        return SheatherJones()
    elif text.startswith('fixed:'):
        return Fixed(_parse_float(text[len('fixed:'):], text))
    elif text.startswith('under:'):
        base, _, exponent = text[len('under:'):].rpartition(':')
        if not base:
            raise DomainError(f'Malformed undersmoothing rule {text!r}')

        return Undersmoothed(
            parse_bandwidth_rule(base),
            _parse_float(exponent, text)
        )

    raise DomainError(f'Unknown bandwidth rule {text!r}')


def _parse_float(value, text):
    try:
        return float(value)
    except ValueError:
        raise DomainError(f'Malformed bandwidth rule {text!r}') from None
