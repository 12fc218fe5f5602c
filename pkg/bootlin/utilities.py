"""Utility functions and classes.

Contains the quadrature machinery shared by the density estimators and
the diagnostics, together with small Gaussian helpers.
"""

import math
import warnings

import numpy as np

from scipy import integrate as _integrate

from .errors import QuadratureError


SQRT_2PI = math.sqrt(2.0 * math.pi)


def normal_pdf(x, variance=1.0):
    """Evaluate the centred normal density with a given variance.

    Parameters
    ----------
    x:
        Points of evaluation; scalars and arrays are both accepted.

    variance:
        Variance of the normal distribution

    Returns
    -------
    Density values with the same shape as `x`.
    """
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x**2 / variance) / math.sqrt(2.0 * math.pi * variance)


class PanelRule:
    """Composite Gauss--Legendre rule on equally-sized panels.

    The interval `[lo, hi]` is split into panels that are no wider than
    `width`; every panel receives `order` Gauss--Legendre nodes. For the
    smooth integrands of this package, panels of a quarter bandwidth are
    accurate far beyond the tolerances we require.
    """

    def __init__(self, lo, hi, width, order=20):
        """Create a new rule.

        Parameters
        ----------
        lo:
            Lower integration limit

        hi:
            Upper integration limit

        width:
            Maximum panel width. Must be positive.

        order:
            Number of nodes per panel
        """
        assert hi > lo
        assert width > 0

        n_panels = max(1, int(math.ceil((hi - lo) / width)))
        edges = np.linspace(lo, hi, n_panels + 1)

        x, w = np.polynomial.legendre.leggauss(order)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])

        self.lo = lo
        self.hi = hi
        self.nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        self.weights = (half[:, None] * w[None, :]).ravel()

    def __len__(self):
        """Return the number of nodes of the rule."""
        return len(self.nodes)

    def integrate(self, values):
        """Integrate function values given at the nodes of the rule."""
        return float(np.dot(self.weights, values))


def panel_integral(func, lo, hi, width, rel_tol=1e-8):
    """Integrate a vectorised function with an error estimate.

    The integral is evaluated with two composite Gauss--Legendre rules
    of different order; their difference serves as the error estimate.

    Parameters
    ----------
    func:
        Vectorised integrand, taking and returning arrays

    lo:
        Lower integration limit

    hi:
        Upper integration limit

    width:
        Maximum panel width

    rel_tol:
        Relative tolerance that the error estimate must meet

    Returns
    -------
    Value of the integral, obtained from the higher-order rule.
    """
    coarse = PanelRule(lo, hi, width, order=10)
    fine = PanelRule(lo, hi, width, order=20)

    value = fine.integrate(func(fine.nodes))
    error = abs(value - coarse.integrate(func(coarse.nodes)))

    if error > rel_tol * max(abs(value), 1e-300):
        raise QuadratureError(
            f'Quadrature did not converge (relative error {error:.3g})',
            achieved=error / max(abs(value), 1e-300)
        )

    return value


def adaptive_integral(func, lo, hi, segments=1, rel_tol=1e-8):
    """Integrate a scalar function by adaptive Gauss--Kronrod quadrature.

    This is a thin wrapper around `scipy.integrate.quad` that splits
    the domain into `segments` pieces, which helps with multi-modal
    integrands such as kernel density estimates.

    Parameters
    ----------
    func:
        Scalar integrand

    lo:
        Lower integration limit

    hi:
        Upper integration limit

    segments:
        Number of equally-sized pieces to integrate separately

    rel_tol:
        Relative tolerance for the total integral

    Returns
    -------
    Value of the integral.
    """
    edges = np.linspace(lo, hi, segments + 1)

    total = 0.0
    total_error = 0.0

    with warnings.catch_warnings():
        warnings.simplefilter('error', _integrate.IntegrationWarning)

        for a, b in zip(edges[:-1], edges[1:]):
            try:
                value, error = _integrate.quad(
                    func, a, b, epsabs=1e-14, epsrel=1e-11, limit=200
                )
            except _integrate.IntegrationWarning as warning:
                raise QuadratureError(str(warning)) from warning

            total += value
            total_error += error

    if total_error > rel_tol * max(abs(total), 1e-300):
        raise QuadratureError(
            f'Adaptive quadrature reached only {total_error:.3g}',
            achieved=total_error / max(abs(total), 1e-300)
        )

    return total
