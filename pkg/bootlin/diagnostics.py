"""Numerical property checks behind `bootlin diag`.

Every check compares two independent computations of the same quantity,
or a Monte Carlo average with its expectation, and passes if the
discrepancy stays within a tolerance. The tolerances can be scaled, which
is used to verify that checks are able to fail.
"""

import dataclasses
import logging
import math

import numpy as np

from scipy import integrate

from . import prng
from . import vstat
from .density import fit
from .density import silverman
from .estimators import PSI_STANDARD_NORMAL
from .simulation import STD_NORMAL
from .simulation import GcompDGP
from .simulation import true_value_check
from .utilities import adaptive_integral
from .utilities import normal_pdf


logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240101


@dataclasses.dataclass(frozen=True)
class CheckResult:
    """Outcome of a single check."""

    name: str
    description: str
    discrepancy: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.discrepancy <= self.tolerance)


def _normal_sample(stream, n):
    return prng.standard_normal(stream, n)


def check_true_value(stream):
    adaptive, hermite = true_value_check(STD_NORMAL)
    discrepancy = max(abs(adaptive - PSI_STANDARD_NORMAL), abs(hermite - PSI_STANDARD_NORMAL))
    return discrepancy, 1e-8


def check_gcomp_true_value(stream):
    adaptive, hermite = true_value_check(GcompDGP())
    return abs(adaptive - hermite), 1e-8


def check_closed_form_square(stream):
    x = _normal_sample(stream, 50)
    density = fit(x, 'gauss', 0.4)

    lo, hi = density.support
    quadrature = adaptive_integral(
        lambda t: float(density(t)**2), lo, hi, segments=int(math.ceil((hi - lo) / 0.4))
    )

    return abs(density.integral_of_square() - quadrature), 1e-8


def check_plugin_bias_identity(stream):
    x = _normal_sample(stream, 50)
    density = fit(x, 'gauss', 0.4)

    direct = vstat.plugin_bias_term(density, x)
    double_sum = vstat.plugin_bias_double_sum('gauss', 0.4, x)

    return abs(direct - double_sum), 1e-12


def check_square_decomposition(stream):
    x = _normal_sample(stream, 100)
    discrepancy = 0.0

    for f in (vstat.SymKernelFn.scaled_kernel('gauss', 0.3),
              vstat.SymKernelFn.convolved_kernel('gauss4', 0.5)):
        diagonal, off_diagonal = vstat.diagonal_split(f, x)
        discrepancy = max(discrepancy, abs(diagonal + off_diagonal - vstat.v_statistic(f, x, x)))

    return discrepancy, 1e-12


def check_population_closed_forms(stream):
    x = 2.0 * _normal_sample(stream, 5)
    discrepancy = 0.0

    for f in (vstat.SymKernelFn.scaled_kernel('gauss', 0.3),
              vstat.SymKernelFn.convolved_kernel('gauss', 0.3)):
        # Outside of ten standard deviations around the diagonal, f vanishes.
        width = 10.0 * math.sqrt(f.variance)

        for point in x:
            inner = adaptive_integral(
                lambda y: float(f(point, y) * normal_pdf(y)), point - width, point + width
            )
            discrepancy = max(
                discrepancy, abs(inner - vstat.population_cross_term(f, [point]))
            )

        outer, _ = integrate.dblquad(
            lambda y, t: float(f(t, y) * normal_pdf(t) * normal_pdf(y)),
            -12.0, 12.0, lambda t: t - width, lambda t: t + width,
            epsabs=1e-12, epsrel=1e-10
        )
        discrepancy = max(discrepancy, abs(outer - vstat.population_term(f)))

    return discrepancy, 1e-7


def _diagonal_law(stream, f, reps=500, n=200):
    values = np.array([
        vstat.signed_v_integral(f, _normal_sample(stream.derive(rep), n))
        for rep in range(reps)
    ])

    standard_error = float(np.std(values, ddof=1)) / math.sqrt(reps)
    return abs(float(np.mean(values)) - f.tau / n), 3.0 * standard_error + 2.0 / n


def check_diagonal_law_kernel(stream):
    return _diagonal_law(stream, vstat.SymKernelFn.scaled_kernel('gauss', 0.3))


def check_diagonal_law_convolved(stream):
    return _diagonal_law(stream, vstat.SymKernelFn.convolved_kernel('gauss', 0.3))


def check_onestep_remainder(stream):
    discrepancy = 0.0

    for rep in range(20):
        x = _normal_sample(stream.derive(rep), 30)
        density = fit(x, 'gauss', silverman(x))

        gap = vstat.onestep_linearization_gap(density, x)
        discrepancy = max(discrepancy, abs(gap - vstat.onestep_remainder(density)))

    return discrepancy, 1e-6


def check_expected_plugin_bias(stream, reps=200, n=500, scale=0.9):
    # Bandwidth at the rate n^(-1/5) of Silverman's rule.
    h = scale * n**-0.2
    values = np.array([
        vstat.plugin_bias_term(fit(x, 'gauss', h), x)
        for x in (_normal_sample(stream.derive(rep), n) for rep in range(reps))
    ])

    standard_error = float(np.std(values, ddof=1)) / math.sqrt(reps)
    expected = vstat.expected_plugin_bias('gauss', h, n)

    return abs(float(np.mean(values)) - expected), 3.0 * standard_error


def check_undersmoothing_bias(stream, reps=200, n=2000, exponent=0.1):
    # Fraction of data sets in which undersmoothing fails to shrink the
    # plug-in bias.
    failures = 0

    for rep in range(reps):
        x = _normal_sample(stream.derive(rep), n)
        h = silverman(x)

        bias = abs(vstat.plugin_bias_term(fit(x, 'gauss', h), x))
        undersmoothed = abs(vstat.plugin_bias_term(fit(x, 'gauss', h / n**exponent), x))

        failures += undersmoothed >= bias

    return failures / reps, 0.1


# Checks in the order in which they are run.
CHECKS = {
    'true_value_std_normal': (
        check_true_value,
        'psi_0 = 1/(2 sqrt(pi)) by adaptive and Gauss-Hermite quadrature'
    ),
    'true_value_gcomp': (
        check_gcomp_true_value,
        'G-computation truth agrees between two quadrature schemes'
    ),
    'closed_form_square': (
        check_closed_form_square,
        'int eta^2 closed form matches adaptive quadrature'
    ),
    'plugin_bias_identity': (
        check_plugin_bias_identity,
        'int eta^2 - P_n eta equals the (K*K)_h - K_h double sum'
    ),
    'square_decomposition': (
        check_square_decomposition,
        'V-statistic splits into tau/n and off-diagonal part'
    ),
    'population_closed_forms': (
        check_population_closed_forms,
        'Gaussian population integrals match quadrature'
    ),
    'diagonal_law_kernel': (
        check_diagonal_law_kernel,
        'E int K_h d(P_n - P_0)^2 is close to tau/n'
    ),
    'diagonal_law_convolved': (
        check_diagonal_law_convolved,
        'E int (K*K)_h d(P_n - P_0)^2 is close to tau/n'
    ),
    'onestep_remainder': (
        check_onestep_remainder,
        'T_1 - psi_0 - (P_n - P_0) phi_n equals -int (eta - phi)^2'
    ),
    'expected_plugin_bias': (
        check_expected_plugin_bias,
        'Monte Carlo plug-in bias matches its closed-form expectation'
    ),
    'undersmoothing_bias': (
        check_undersmoothing_bias,
        'Undersmoothing shrinks the plug-in bias in 90% of data sets'
    ),
}


def run_checks(names=None, tolerance_scale=1.0, seed=DEFAULT_SEED):
    """Run property checks.

    Parameters
    ----------
    names:
        Names of the checks to run; all checks by default

    tolerance_scale : float
        Factor applied to every tolerance

    seed : int
        Root seed of the Monte Carlo checks

    Returns
    -------
    List of `CheckResult` in the order of `CHECKS`.
    """
    names = list(CHECKS) if names is None else list(names)
    unknown = set(names) - set(CHECKS)
    assert not unknown, f'Unknown checks {sorted(unknown)}'

    results = []
    for index, name in enumerate(CHECKS):
        if name not in names:
            continue

        func, description = CHECKS[name]
        discrepancy, tolerance = func(prng.RngStream(seed, (index,)))

        result = CheckResult(name, description, float(discrepancy), tolerance * tolerance_scale)
        logger.info('%s: %s (%.3g <= %.3g)', name, 'PASS' if result.passed else 'FAIL',
                    result.discrepancy, result.tolerance)

        results.append(result)

    return results
