"""Targeting of kernel density estimates toward the average density value.

The efficient influence function of the average density value at a
density `eta` is `2 eta(x) - 2 psi(eta)` with `psi(eta) = int eta^2`.
Targeting fluctuates the estimate along the exponential tilt

    eta_eps(x) = eta(x) exp(2 eps eta(x)) / c(eps),

where `c(eps)` renormalises the density, and chooses `eps` such that
the empirical mean of the efficient influence function vanishes. The
tilt keeps the density nonnegative. Every iteration re-anchors the
score at the current density.
"""

import logging
import math

import numpy as np

from scipy.optimize import brentq

from ..errors import DomainError
from ..errors import TargetingError
from .kde import FluctuationStep
from .kde import as_sample


logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 20

# Largest admissible exponent of the tilt; beyond this, the tilted
# density overflows.
_MAX_EXPONENT = 300.0


def efficient_score(density_values, data_values, rule):
    """Calculate the empirical mean of the efficient influence function.

    Parameters
    ----------
    density_values:
        Density values at the nodes of `rule`

    data_values:
        Density values at the observations

    rule : PanelRule
        Quadrature rule used for the integral of the squared density

    Returns
    -------
    Value of `2 P_n eta - 2 int eta^2`.
    """
    return 2.0 * float(np.mean(data_values)) - 2.0 * rule.integrate(density_values**2)


def _step(grid, epsilon, rule):
    """Fluctuation step with parameter `epsilon` anchored at `grid`."""
    normalizer = rule.integrate(grid * np.exp(2.0 * epsilon * grid))
    return FluctuationStep(
        epsilon=float(epsilon),
        normalizer=float(normalizer),
        anchor_psi=rule.integrate(grid**2)
    )


def _bracket(score, limit):
    """Find an interval `(0, eps)` on which `score` changes its sign."""
    f_0 = score(0.0)
    step = limit * 2.0**-30

    while step <= limit:
        for epsilon in (step, -step):
            f = score(epsilon)
            if np.isfinite(f) and np.sign(f) != np.sign(f_0):
                return epsilon

        step *= 2.0

    return None


def tmle_target(density, sample, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Target a kernel density estimate by exponential tilting.

    Parameters
    ----------
    density : DensityEstimate
        Initial estimate. Must not be fluctuated yet.

    sample:
        Sample whose empirical distribution defines the score equation

    tol : float
        Tolerance for the absolute empirical mean of the efficient
        influence function

    max_iter : int
        Maximum number of tilting steps

    Returns
    -------
    Fluctuated `DensityEstimate` that solves the score equation to
    `tol`. If the initial estimate already solves it, the estimate is
    returned unchanged.
    """
    if density.is_targeted:
        raise DomainError('Targeting requires an unfluctuated initial estimate')

    if not tol > 0:
        raise DomainError(f'Targeting tolerance must be positive, got {tol}')

    sample = as_sample(sample)
    rule = density.quadrature_rule

    grid = density.kde(rule.nodes)
    data = density.kde(sample.points)

    result = density
    score = efficient_score(grid, data, rule)

    for iteration in range(max_iter):
        if abs(score) <= tol:
            break

        def _tilted_score(epsilon):
            with np.errstate(over='ignore', invalid='ignore'):
                step = _step(grid, epsilon, rule)
                return efficient_score(step.apply(grid), step.apply(data), rule)

        limit = _MAX_EXPONENT / (2.0 * max(grid.max(), data.max()))
        end = _bracket(_tilted_score, limit)

        if end is None:
            raise TargetingError(
                'Could not bracket the root of the score equation',
                score=abs(score)
            )

        lo, hi = min(0.0, end), max(0.0, end)

        try:
            epsilon = brentq(_tilted_score, lo, hi, xtol=1e-15, maxiter=500)
        except (ValueError, RuntimeError) as error:
            raise TargetingError(
                f'Root finding failed: {error}', score=abs(score)
            ) from error

        step = _step(grid, epsilon, rule)

        grid = step.apply(grid)
        data = step.apply(data)
        result = result.with_fluctuation(step)
        score = efficient_score(grid, data, rule)

        logger.debug(
            'Targeting step %d: epsilon = %.3g, |P_n phi| = %.3g',
            iteration + 1, epsilon, abs(score)
        )

    if not abs(score) <= tol or not math.isfinite(score):
        raise TargetingError(
            f'Targeting did not converge after {max_iter} iterations '
            f'(|P_n phi| = {abs(score):.3g})',
            score=abs(score)
        )

    return result
