"""Monte Carlo coverage studies.

A study sweeps over sample sizes and study cells. A cell is a
combination of estimator construction, nuisance procedure, bootstrap
scheme, and nuisance policy; every cell reports the coverage and the
mean scaled width `sqrt(n) (hi - lo)` of each requested interval method.

Every Monte Carlo replication is an independent task whose random
numbers are derived from `(seed, cell, n index, replication)`, so a
study is reproducible regardless of how many workers execute it.
"""

import dataclasses
import itertools
import logging
import math

import numpy as np

from joblib import Parallel
from joblib import delayed
from scipy import integrate
from scipy.special import expit

from . import prng
from .bootstrap import parse_policy
from .bootstrap import parse_scheme
from .bootstrap import run_replicates
from .bootstrap import validate_configuration
from .density import Sample
from .errors import BootlinError
from .errors import DomainError
from .estimators import AverageDensity
from .estimators import CausalSample
from .estimators import GComputation
from .estimators import PSI_STANDARD_NORMAL
from .estimators import parse_nuisance
from .intervals import METHODS
from .intervals import IntervalSpec
from .intervals import construct
from .representations import CoverageTable
from .utilities import normal_pdf


logger = logging.getLogger(__name__)

STD_NORMAL = 'std_normal'

# Number of Gauss--Hermite nodes of the second quadrature scheme.
_HERMITE_NODES = 120


@dataclasses.dataclass(frozen=True)
class GcompDGP:
    """Synthetic data-generating process of the G-computed conditional mean.

    The covariate is standard normal, the propensity score is
    `expit(intercept + slope z)`, and outcomes follow
    `Y = outcome_slope Z + noise_sd N(0, 1)`.
    """

    slope: float = 0.5
    intercept: float = 0.0
    outcome_slope: float = 1.0
    noise_sd: float = 0.5

    def __post_init__(self):
        if not self.noise_sd >= 0:
            raise DomainError(f'Noise standard deviation must be nonnegative, got {self.noise_sd}')

    def g(self, z):
        """Evaluate the true propensity score."""
        return expit(self.intercept + self.slope * np.asarray(z, dtype=float))

    def mu(self, z):
        """Evaluate the true outcome regression among controls."""
        return self.outcome_slope * np.asarray(z, dtype=float)

    def draw(self, n, stream):
        """Draw a `CausalSample` of size `n`."""
        z = prng.standard_normal(stream.derive(0), n)
        u = prng.uniform01(stream.derive(1), n)
        noise = prng.standard_normal(stream.derive(2), n)

        a = (u < self.g(z)).astype(int)
        y = self.mu(z) + self.noise_sd * noise

        return CausalSample(y, a, z)


def draw_data(dgp, n, stream):
    """Draw a data set of size `n` from a data-generating process."""
    if dgp == STD_NORMAL:
        return Sample(prng.standard_normal(stream, n))

    return dgp.draw(n, stream)


def _gcomp_quad(dgp):
    numerator, _ = integrate.quad(
        lambda z: float(dgp.mu(z) * dgp.g(z) * normal_pdf(z)),
        -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12
    )
    denominator, _ = integrate.quad(
        lambda z: float(dgp.g(z) * normal_pdf(z)),
        -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12
    )

    return numerator / denominator


def _gcomp_hermite(dgp):
    # Nodes and weights for the weight function exp(-z^2 / 2).
    z, w = np.polynomial.hermite_e.hermegauss(_HERMITE_NODES)
    g = dgp.g(z)

    return float(np.sum(w * dgp.mu(z) * g) / np.sum(w * g))


def true_value(dgp):
    """Return the true parameter value of a data-generating process.

    Parameters
    ----------
    dgp:
        Either `'std_normal'`, for the average density value of the
        standard normal, or a `GcompDGP`

    Returns
    -------
    True value as a float.
    """
    if dgp == STD_NORMAL:
        return PSI_STANDARD_NORMAL

    if isinstance(dgp, GcompDGP):
        return _gcomp_quad(dgp)

    raise DomainError(f'Unknown data-generating process {dgp!r}')


def true_value_check(dgp):
    """Evaluate the true value with two independent quadrature schemes.

    Returns
    -------
    Tuple of the adaptive quadrature and the Gauss--Hermite values.
    """
    if dgp == STD_NORMAL:
        adaptive, _ = integrate.quad(
            lambda x: float(normal_pdf(x)**2), -np.inf, np.inf,
            epsabs=1e-13, epsrel=1e-12
        )
        z, w = np.polynomial.hermite_e.hermegauss(_HERMITE_NODES)
        hermite = float(np.sum(w * normal_pdf(z)) / math.sqrt(2.0 * math.pi))

        return adaptive, hermite

    return _gcomp_quad(dgp), _gcomp_hermite(dgp)


@dataclasses.dataclass(frozen=True)
class SimConfig:
    """Configuration of a coverage study.

    Parameters
    ----------
    n_grid : tuple of int
        Sample sizes

    mc_reps : int
        Monte Carlo replications per sample size

    B : int
        Bootstrap replicates

    level : float
        Nominal level of equi-tailed intervals

    dgp:
        `'std_normal'` or a `GcompDGP`

    constructions, nuisances, schemes, policies, methods : tuple of str
        Grid of study cells and interval methods. For the G-computed
        conditional mean, nuisances are given as `MU/G`.

    kernel : str
        Kernel of all density nuisances

    seed : int
        Root seed

    threads : int
        Number of parallel workers; `-1` uses all cores
    """

    n_grid: tuple = (100, 500, 2000)
    mc_reps: int = 300
    B: int = 400
    level: float = 0.95
    dgp: object = STD_NORMAL
    constructions: tuple = ('onestep',)
    nuisances: tuple = ('sj',)
    schemes: tuple = ('empirical',)
    policies: tuple = ('refit',)
    methods: tuple = METHODS
    kernel: str = 'gauss'
    seed: int = 0
    threads: int = -1

    def __post_init__(self):
        if len(self.n_grid) == 0 or min(self.n_grid) < 1:
            raise DomainError(f'Sample sizes must be positive, got {self.n_grid}')

        if self.mc_reps < 1:
            raise DomainError(f'At least one Monte Carlo replication is required, got {self.mc_reps}')

        if self.B < 1:
            raise DomainError(f'At least one bootstrap replicate is required, got {self.B}')

        if not 0 < self.level < 1:
            raise DomainError(f'Level must lie in (0, 1), got {self.level}')

        if self.dgp != STD_NORMAL and not isinstance(self.dgp, GcompDGP):
            raise DomainError(f'Unknown data-generating process {self.dgp!r}')

        for method in self.methods:
            IntervalSpec.equi_tailed(self.level, method)

        # Parse all identifiers once so that malformed configurations
        # fail before any work is done.
        for cell in self.cells():
            validate_configuration(cell.parameter(), parse_scheme(cell.scheme, self.kernel))
            parse_policy(cell.policy)

    @property
    def is_gcomp(self):
        """Check whether the study concerns the G-computed conditional mean."""
        return isinstance(self.dgp, GcompDGP)

    def cells(self):
        """Return the study cells in their canonical order."""
        grid = itertools.product(
            self.constructions, self.nuisances, self.schemes, self.policies
        )

        return [
            StudyCell(index, self.is_gcomp, self.kernel, *values)
            for index, values in enumerate(grid)
        ]


@dataclasses.dataclass(frozen=True)
class StudyCell:
    """One combination of construction, nuisance, scheme, and policy."""

    config_id: int
    gcomp: bool
    kernel: str
    construction: str
    nuisance: str
    scheme: str
    policy: str

    def parameter(self):
        """Create the parameter object of this cell."""
        if self.gcomp:
            try:
                mu_method, g_method = self.nuisance.split('/')
            except ValueError:
                raise DomainError(
                    f'G-computation nuisances are given as MU/G, got {self.nuisance!r}'
                ) from None

            return GComputation(self.construction, mu_method, g_method)

        return AverageDensity(self.construction, parse_nuisance(self.nuisance, self.kernel))

    def label(self):
        """Return the nuisance label used in coverage tables."""
        parameter = self.parameter()
        if self.gcomp:
            return parameter.nuisance_label

        return str(parameter.nuisance)


def _run_rep(cell, n, n_index, rep, cfg, truth):
    """Run one Monte Carlo replication and return per-method outcomes."""
    stream = prng.RngStream(cfg.seed, (cell.config_id, n_index, rep))

    param = cell.parameter()
    scheme = parse_scheme(cell.scheme, cfg.kernel)
    policy = parse_policy(cell.policy)

    outcomes = {}

    try:
        data = draw_data(cfg.dgp, n, stream.derive(prng.DATA))
        fit = param.fit(data)
        report = param.report(fit)
    except BootlinError as error:
        logger.debug('Replication %d of cell %d at n = %d failed: %s',
                     rep, cell.config_id, n, error)
        return {method: None for method in cfg.methods}

    replicates = None
    bootstrap_failed = False

    if any(method != 'wald' for method in cfg.methods):
        try:
            replicates = run_replicates(
                param, data, scheme, policy, cfg.B,
                stream.derive(prng.BOOTSTRAP), fit=fit
            )
        except BootlinError as error:
            logger.debug('Bootstrap of replication %d of cell %d at n = %d failed: %s',
                         rep, cell.config_id, n, error)
            bootstrap_failed = True

    for method in cfg.methods:
        if bootstrap_failed and method != 'wald':
            outcomes[method] = None
            continue

        spec = IntervalSpec.equi_tailed(cfg.level, method)

        try:
            interval = construct(spec, report, replicates, n)
        except BootlinError as error:
            logger.debug('Method %s failed in replication %d: %s', method, rep, error)
            outcomes[method] = None
            continue

        outcomes[method] = (interval.contains(truth), math.sqrt(n) * interval.width)

    return outcomes


def run_study(cfg):
    """Run a coverage study.

    Parameters
    ----------
    cfg : SimConfig
        Study configuration

    Returns
    -------
    `CoverageTable` with one row per cell, sample size, and method.
    Replications that failed for a method are counted in the column
    `failures` and excluded from its coverage.
    """
    truth = true_value(cfg.dgp)
    cells = cfg.cells()

    tasks = [
        (cell, n, n_index, rep)
        for cell in cells
        for n_index, n in enumerate(cfg.n_grid)
        for rep in range(cfg.mc_reps)
    ]

    logger.info(
        'Running %d cells x %d sample sizes x %d replications on %d workers',
        len(cells), len(cfg.n_grid), cfg.mc_reps, cfg.threads
    )

    results = Parallel(n_jobs=cfg.threads)(
        delayed(_run_rep)(cell, n, n_index, rep, cfg, truth)
        for cell, n, n_index, rep in tasks
    )

    # Results arrive in task order; each (cell, n) owns a contiguous block.
    records = []
    blocks = iter(results)

    for cell in cells:
        label = cell.label()

        for n in cfg.n_grid:
            block = [next(blocks) for _ in range(cfg.mc_reps)]

            for method in cfg.methods:
                outcomes = [outcome[method] for outcome in block if outcome[method] is not None]
                failures = cfg.mc_reps - len(outcomes)

                if outcomes:
                    coverage = float(np.mean([covered for covered, _ in outcomes]))
                    width = float(np.mean([width for _, width in outcomes]))
                else:
                    coverage, width = math.nan, math.nan

                records.append((
                    cell.config_id, n, cell.construction, label, cell.scheme,
                    cell.policy, method, coverage, width, len(outcomes), failures
                ))

            logger.info('Cell %d (%s, %s, %s, %s) at n = %d done',
                        cell.config_id, cell.construction, label, cell.scheme,
                        cell.policy, n)

    return CoverageTable(records)
