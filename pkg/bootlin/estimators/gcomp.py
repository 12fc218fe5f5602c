"""G-computed conditional mean `E[mu(Z) | A = 1]`.

Here `mu(z) = E[Y | A = 0, Z = z]` is the outcome regression among
controls and `g(z) = P(A = 1 | Z = z)` the propensity score. Two
estimators are available: the one-step estimator, which uses
`pi_n = int g_n dQ_n`, and the estimating-equations estimator, which
uses the treated fraction `pi-bar_n`. Both coincide if `pi_n` equals
`pi-bar_n`.
"""

import dataclasses
import enum

import numpy as np
import pandas as pd

from scipy.special import softmax
from sklearn.linear_model import LinearRegression
from sklearn.linear_model import LogisticRegression

from ..errors import DegenerateDataError
from ..errors import DomainError
from ..errors import FitError
from ..representations import EstimatorReport
from .average_density import sigma_if


DEFAULT_TRUNCATION = (0.01, 0.99)


class CausalSample:
    """Observations `(Y, A, Z)` with binary treatment and scalar covariate."""

    def __init__(self, y, a, z, indices=None):
        """Create a new sample.

        Parameters
        ----------
        y:
            Outcomes

        a:
            Treatment indicators; must be 0 or 1

        z:
            Covariates

        indices:
            Optional parent indices of a resample
        """
        y = np.asarray(y, dtype=float).ravel()
        z = np.asarray(z, dtype=float).ravel()
        a_raw = np.asarray(a).ravel()

        if not (len(y) == len(a_raw) == len(z)):
            raise DomainError('Columns y, a, and z must have equal lengths')

        if len(y) == 0:
            raise DomainError('A sample requires at least one observation')

        if not np.all(np.isin(a_raw, (0, 1))):
            raise DomainError('Treatment indicators must be 0 or 1')

        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(z))):
            raise DomainError('Outcomes and covariates must be finite')

        self.y = y
        self.a = a_raw.astype(int)
        self.z = z
        self.indices = indices

        if not np.any(self.a == 1):
            raise DegenerateDataError('Sample contains no treated units')

        if not np.any(self.a == 0):
            raise DegenerateDataError('Sample contains no controls')

    def __len__(self):
        """Return the number of observations."""
        return len(self.y)

    def __repr__(self):
        return f'CausalSample(n={self.n}, treated={int(self.a.sum())})'

    @property
    def n(self):
        """Return the number of observations."""
        return len(self.y)

    @property
    def treated_fraction(self):
        """Return `pi-bar_n`, the fraction of treated units."""
        return float(np.mean(self.a))

    def take(self, indices):
        """Return the resample consisting of the given rows."""
        indices = np.asarray(indices)
        return CausalSample(
            self.y[indices], self.a[indices], self.z[indices], indices=indices
        )

    def to_frame(self):
        """Return the sample as a `pd.DataFrame` with columns y, a, z."""
        return pd.DataFrame({'y': self.y, 'a': self.a, 'z': self.z})

    @classmethod
    def from_frame(cls, frame):
        """Create a sample from a data frame with columns y, a, z."""
        missing = {'y', 'a', 'z'} - set(frame.columns)
        if missing:
            raise DomainError(f'Missing columns {sorted(missing)}')

        return cls(frame['y'].to_numpy(), frame['a'].to_numpy(), frame['z'].to_numpy())


@dataclasses.dataclass(frozen=True)
class RegressionMethod:
    """Regression method for one of the nuisance functions.

    Parameters
    ----------
    kind : str
        One of `linear`, `logistic`, or `kernel`

    bandwidth : float or None
        Bandwidth of the Nadaraya--Watson smoother for `kernel`
    """

    kind: str
    bandwidth: float = None

    def __post_init__(self):
        if self.kind not in ('linear', 'logistic', 'kernel'):
            raise DomainError(f'Unknown regression method {self.kind!r}')

        if self.kind == 'kernel' and not (self.bandwidth is not None and self.bandwidth > 0):
            raise DomainError(
                f'Kernel regression requires a positive bandwidth, got {self.bandwidth}'
            )

    def __str__(self):
        if self.kind == 'kernel':
            return f'kernel:{self.bandwidth:g}'

        return self.kind


def parse_method(text):
    """Parse `linear`, `logistic`, or `kernel:H` into a `RegressionMethod`."""
    if isinstance(text, RegressionMethod):
        return text

    text = str(text).strip().lower()
    if text.startswith('kernel:'):
        try:
            h = float(text[len('kernel:'):])
        except ValueError:
            raise DomainError(f'Malformed kernel method {text!r}') from None

        return RegressionMethod('kernel', h)

    return RegressionMethod(text)


class LinearFit:
    """Least-squares line `z -> b_0 + b_1 z`."""

    def __init__(self, z, target):
        if len(z) < 2 or np.ptp(z) == 0:
            raise FitError('Singular design for linear regression')

        self._model = LinearRegression().fit(z[:, None], target)

    def __call__(self, z):
        return self._model.predict(np.asarray(z, dtype=float).reshape(-1, 1))


class LogisticFit:
    """Logistic regression of the treatment on the covariate."""

    def __init__(self, z, a):
        if np.ptp(z) == 0:
            raise FitError('Singular design for logistic regression')

        # Without regularisation, the maximum likelihood estimate does not
        # exist if the covariate separates both arms.
        z_0, z_1 = z[a == 0], z[a == 1]
        if z_0.max() < z_1.min() or z_1.max() < z_0.min():
            raise FitError('Covariate perfectly separates treatment arms')

        self._model = LogisticRegression(
            penalty=None, solver='newton-cholesky', tol=1e-10, max_iter=25
        ).fit(z[:, None], a)

    def __call__(self, z):
        return self._model.predict_proba(np.asarray(z, dtype=float).reshape(-1, 1))[:, 1]


class NadarayaWatson:
    """Nadaraya--Watson smoother with a Gaussian kernel."""

    def __init__(self, z, target, h):
        self._z = np.asarray(z, dtype=float)
        self._target = np.asarray(target, dtype=float)
        self._h = h

    def __call__(self, z):
        z = np.asarray(z, dtype=float).ravel()

        # Normalised Gaussian weights; the softmax keeps them well defined
        # far away from the data.
        weights = softmax(
            -0.5 * (np.subtract.outer(z, self._z) / self._h)**2, axis=1
        )
        return weights @ self._target


def _fit(method, z, target):
    if method.kind == 'linear':
        return LinearFit(z, target)
    elif method.kind == 'logistic':
        return LogisticFit(z, target)
    else:
        return NadarayaWatson(z, target, method.bandwidth)


class GcompNuisance:
    """Fitted nuisance `(mu, g, Q_n)` of the G-computed conditional mean.

    The propensity score is truncated into `[lo, hi]`, and `pi` is its
    mean over the observed covariates.
    """

    q_is_empirical = True

    def __init__(self, mu, g, z, truncation=DEFAULT_TRUNCATION,
                 mu_method=None, g_method=None):
        """Create a new nuisance from regression functions.

        Parameters
        ----------
        mu:
            Outcome regression among controls, vectorised over `z`

        g:
            Propensity score, vectorised over `z`

        z:
            Observed covariates, defining the empirical distribution `Q_n`

        truncation:
            Bounds `(lo, hi)` with `0 < lo < hi < 1`

        mu_method, g_method : RegressionMethod or None
            Methods that produced the regressions, if any
        """
        lo, hi = truncation
        if not 0 < lo < hi < 1:
            raise DomainError(f'Truncation bounds must satisfy 0 < lo < hi < 1, got {truncation}')

        self._mu = mu
        self._g = g
        self.truncation = (float(lo), float(hi))
        self.mu_method = mu_method
        self.g_method = g_method
        self.pi = float(np.mean(self.g(z)))

    def mu(self, z):
        """Evaluate the outcome regression."""
        return np.asarray(self._mu(np.asarray(z, dtype=float)), dtype=float)

    def g(self, z):
        """Evaluate the truncated propensity score."""
        lo, hi = self.truncation
        return np.clip(self._g(np.asarray(z, dtype=float)), lo, hi)


def fit_nuisance(data, mu_method='linear', g_method='logistic',
                 trunc=DEFAULT_TRUNCATION):
    """Fit the nuisance of the G-computed conditional mean.

    Parameters
    ----------
    data : CausalSample
        Observations

    mu_method:
        Method for the outcome regression, fitted on controls only

    g_method:
        Method for the propensity score, fitted on all observations

    trunc:
        Truncation bounds for the propensity score

    Returns
    -------
    Fitted `GcompNuisance`.
    """
    mu_method = parse_method(mu_method)
    g_method = parse_method(g_method)

    lo, hi = trunc
    if not 0 < lo < hi < 1:
        raise DomainError(f'Truncation bounds must satisfy 0 < lo < hi < 1, got {trunc}')

    if mu_method.kind == 'logistic' or g_method.kind == 'linear':
        raise DomainError('Outcome regression must be linear or kernel, propensity logistic or kernel')

    controls = data.a == 0
    if not np.any(controls):
        raise DegenerateDataError('Sample contains no controls')

    mu = _fit(mu_method, data.z[controls], data.y[controls])
    g = _fit(g_method, data.z, data.a)

    return GcompNuisance(mu, g, data.z, trunc, mu_method, g_method)


def _terms(data, nuisance):
    g = nuisance.g(data.z)
    mu = nuisance.mu(data.z)
    control = data.a == 0
    treated = data.a == 1

    weight = np.where(control, g / (1.0 - g), 0.0)
    residual = np.where(control, data.y - mu, 0.0)

    return weight * residual, np.where(treated, mu, 0.0), treated


def estimate_ee(data, nuisance):
    """Calculate the estimating-equations estimator.

    Parameters
    ----------
    data : CausalSample
        Observations

    nuisance : GcompNuisance
        Fitted nuisance

    Returns
    -------
    Point estimate as a float.
    """
    pi_bar = data.treated_fraction
    if pi_bar <= 0:
        raise DegenerateDataError('No treated units; pi-bar is zero')

    correction, treated_mu, _ = _terms(data, nuisance)
    return float(np.mean(correction / pi_bar + treated_mu / pi_bar))


def estimate_onestep(data, nuisance):
    """Calculate the one-step estimator.

    The treated term carries the factor `2 - pi-bar_n / pi_n`.
    """
    pi = nuisance.pi
    pi_bar = data.treated_fraction

    if pi <= 0:
        raise DegenerateDataError('Propensity mass pi_n is zero')

    correction, treated_mu, _ = _terms(data, nuisance)
    return float(np.mean(
        correction / pi + (2.0 - pi_bar / pi) * treated_mu / pi
    ))


def influence_values_gcomp(data, nuisance, psi_hat, pi=None):
    """Evaluate the efficient influence function on every row.

    Parameters
    ----------
    data : CausalSample
        Observations

    nuisance : GcompNuisance
        Fitted nuisance

    psi_hat : float
        Estimate at which the influence function is evaluated

    pi : float or None
        Treatment probability; defaults to `pi_n` of the nuisance

    Returns
    -------
    Array of influence function values.
    """
    pi = nuisance.pi if pi is None else pi
    correction, treated_mu, treated = _terms(data, nuisance)

    return correction / pi + np.where(treated, treated_mu - psi_hat, 0.0) / pi


class GcompConstruction(enum.Enum):
    """Estimator construction for the G-computed conditional mean."""

    ONESTEP = 'onestep'
    EE = 'ee'

    def __str__(self):
        return self.value


def parse_gcomp_construction(text):
    """Convert a string identifier into a `GcompConstruction`."""
    if isinstance(text, GcompConstruction):
        return text

    try:
        return GcompConstruction(str(text).strip().lower())
    except ValueError:
        raise DomainError(
            f'Unknown construction {text!r}; expected onestep or ee'
        ) from None


@dataclasses.dataclass(frozen=True)
class GcompFit:
    """Nuisance fitted on the original sample."""

    sample: CausalSample
    nuisance: GcompNuisance


class GComputation:
    """G-computed conditional mean with a given construction.

    Only the empirical bootstrap is available for this parameter.
    """

    supports_smooth_bootstrap = False

    def __init__(self, construction, mu_method='linear', g_method='logistic',
                 trunc=DEFAULT_TRUNCATION):
        self.construction = parse_gcomp_construction(construction)
        self.mu_method = parse_method(mu_method)
        self.g_method = parse_method(g_method)
        self.trunc = tuple(trunc)

    def __repr__(self):
        return f'GComputation({self.construction}, {self.nuisance_label})'

    @property
    def nuisance_label(self):
        """Return the label `MU/G` of the nuisance methods."""
        return f'{self.mu_method}/{self.g_method}'

    def _estimate(self, data, nuisance):
        if self.construction is GcompConstruction.ONESTEP:
            return estimate_onestep(data, nuisance)

        return estimate_ee(data, nuisance)

    def fit(self, data):
        """Fit the nuisance on the original sample."""
        return GcompFit(
            data, fit_nuisance(data, self.mu_method, self.g_method, self.trunc)
        )

    def report(self, fit, scheme_density=None):
        """Summarise the estimator on the original sample."""
        assert scheme_density is None

        psi_hat = self._estimate(fit.sample, fit.nuisance)
        if_values = influence_values_gcomp(fit.sample, fit.nuisance, psi_hat)

        return EstimatorReport(
            psi_hat=psi_hat,
            sigma_hat=sigma_if(if_values),
            center_at_sampling_dist=psi_hat,
            if_values=if_values
        )

    def replicate(self, fit, boot, fixed):
        """Calculate one bootstrap replicate `(psi*, sigma*)`."""
        if fixed:
            nuisance = fit.nuisance
        else:
            nuisance = fit_nuisance(boot, self.mu_method, self.g_method, self.trunc)

        psi_star = self._estimate(boot, nuisance)
        if_values = influence_values_gcomp(boot, nuisance, psi_star)

        return psi_star, sigma_if(if_values)
