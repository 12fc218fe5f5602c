"""Unit tests for bootstrap schemes and replicate generation."""

import math
import types
import unittest

import numpy as np

from scipy.stats import kstest

from bootlin.bootstrap import EMPIRICAL
from bootlin.bootstrap import SMOOTH
from bootlin.bootstrap import NuisancePolicy
from bootlin.bootstrap import draw_bootstrap_sample
from bootlin.bootstrap import parse_policy
from bootlin.bootstrap import parse_scheme
from bootlin.bootstrap import run_replicates
from bootlin.density import Sample
from bootlin.density import fit
from bootlin.density import tmle_target
from bootlin.errors import DegenerateIntervalWarning
from bootlin.errors import DomainError
from bootlin.errors import FitError
from bootlin.errors import ReplicateFailureError
from bootlin.errors import UnsupportedOperationError
from bootlin.estimators import AverageDensity
from bootlin.estimators import GComputation
from bootlin.estimators import parse_nuisance
from bootlin.prng import RngStream
from bootlin.prng import standard_normal
from bootlin.representations import EstimatorReport
from bootlin.simulation import GcompDGP


def _normal_sample(seed, n):
    return Sample(standard_normal(RngStream(seed), n))


class _FailingParameter:
    """Parameter whose replicates always fail."""

    supports_smooth_bootstrap = False

    def fit(self, sample):
        return types.SimpleNamespace(sample=sample)

    def report(self, fit, scheme_density=None):
        return EstimatorReport(0.0, 1.0, 0.0, np.zeros(len(fit.sample)))

    def replicate(self, fit, boot, fixed):
        raise FitError('Replicate cannot be computed')


class TestSchemes(unittest.TestCase):
    """Parsing of schemes and policies."""

    def test_parse(self):
        self.assertIs(parse_scheme('empirical'), EMPIRICAL)
        self.assertIs(parse_scheme('Smooth'), SMOOTH)

        scheme = parse_scheme('smooth:sj+tmle')
        self.assertTrue(scheme.is_smooth)
        self.assertTrue(scheme.source.tmle)
        self.assertEqual(str(scheme), 'smooth:sj+tmle')

        for text in ['parametric', 'smooth:nonsense']:
            with self.assertRaises(DomainError):
                parse_scheme(text)

    def test_policy(self):
        self.assertIs(parse_policy('refit'), NuisancePolicy.REFIT)
        self.assertIs(parse_policy('FIXED'), NuisancePolicy.FIXED)

        with self.assertRaises(DomainError):
            parse_policy('frozen')


class TestSampling(unittest.TestCase):
    """Draws from the sampling schemes."""

    def test_single_observation(self):
        sample = Sample([3.5])
        boot = draw_bootstrap_sample(EMPIRICAL, sample, None, RngStream(0))

        np.testing.assert_array_equal(boot.points, [3.5])
        np.testing.assert_array_equal(boot.indices, [0])

    def test_empirical(self):
        sample = _normal_sample(0, 50)
        boot = draw_bootstrap_sample(EMPIRICAL, sample, None, RngStream(1))

        self.assertEqual(len(boot), 50)
        np.testing.assert_array_equal(boot.points, sample.points[boot.indices])

    def test_smooth_moments(self):
        # Kernel noise adds h^2 to the variance of the resampled points.
        sample = _normal_sample(2, 100000)
        density = fit(sample, 'gauss', 0.5)
        boot = draw_bootstrap_sample(SMOOTH, sample, density, RngStream(3))

        self.assertAlmostEqual(
            float(np.mean(boot.points)), float(np.mean(sample.points)), delta=0.02
        )
        self.assertAlmostEqual(
            float(np.var(boot.points)), float(np.var(sample.points)) + 0.25, delta=0.03
        )
        self.assertIsNone(boot.indices)

    def test_targeted(self):
        sample = _normal_sample(4, 100)
        density = tmle_target(fit(sample, 'gauss', 0.4), sample)
        boot = draw_bootstrap_sample(SMOOTH, sample, density, RngStream(5))

        lo, hi = density.support
        self.assertEqual(len(boot), 100)
        self.assertTrue(np.all((boot.points >= lo) & (boot.points <= hi)))

    def test_deterministic(self):
        sample = _normal_sample(6, 30)
        density = fit(sample, 'gauss', 0.3)

        for scheme, source in [(EMPIRICAL, None), (SMOOTH, density)]:
            first = draw_bootstrap_sample(scheme, sample, source, RngStream(7))
            second = draw_bootstrap_sample(scheme, sample, source, RngStream(7))

            np.testing.assert_array_equal(first.points, second.points)


class TestReplicates(unittest.TestCase):
    """Replicate generation for the average density value."""

    def setUp(self):
        self.sample = _normal_sample(10, 60)

    def test_fixed_plugin(self):
        param = AverageDensity('plugin', parse_nuisance('fixed:0.4'))

        with self.assertWarns(DegenerateIntervalWarning):
            replicates = run_replicates(
                param, self.sample, 'empirical', 'fixed', 5, RngStream(0)
            )

        psi_hat = param.report(param.fit(self.sample)).psi_hat
        np.testing.assert_array_equal(replicates.psi_star, np.full(5, psi_hat))

    def test_fixed_onestep(self):
        # With a fixed nuisance, psi* - psi_hat = 2 (P*_n - P_n) eta_n.
        param = AverageDensity('onestep', parse_nuisance('fixed:0.4'))
        fit_ = param.fit(self.sample)
        psi_hat = param.report(fit_).psi_hat
        stream = RngStream(1)

        replicates = run_replicates(
            param, self.sample, 'empirical', 'fixed', 4, stream, fit=fit_
        )

        for b in range(4):
            boot = draw_bootstrap_sample(EMPIRICAL, self.sample, None, stream.derive(b))
            expected = psi_hat + 2.0 * (
                np.mean(fit_.density(boot.points)) - np.mean(fit_.at_data)
            )

            self.assertAlmostEqual(replicates.psi_star[b], expected, places=12)

    def test_threads(self):
        param = AverageDensity('onestep', parse_nuisance('silverman'))
        stream = RngStream(2)

        single = run_replicates(param, self.sample, 'smooth', 'refit', 3, stream, n_jobs=1)
        double = run_replicates(param, self.sample, 'smooth', 'refit', 3, stream, n_jobs=2)

        np.testing.assert_array_equal(single.psi_star, double.psi_star)
        np.testing.assert_array_equal(single.sigma_star, double.sigma_star)

    def test_smooth_center(self):
        param = AverageDensity('onestep', parse_nuisance('fixed:0.4'))
        fit_ = param.fit(self.sample)

        replicates = run_replicates(
            param, self.sample, 'smooth', 'refit', 2, RngStream(3), fit=fit_
        )
        expected = param.report(fit_, fit_.density).center_at_sampling_dist

        self.assertEqual(replicates.center, expected)
        self.assertEqual(replicates.n_invalid, 0)

    def test_unsupported(self):
        data = GcompDGP().draw(50, RngStream(4))

        with self.assertRaises(UnsupportedOperationError):
            run_replicates(GComputation('ee'), data, 'smooth', 'refit', 3, RngStream(5))

        param = AverageDensity('onestep', parse_nuisance('fixed:0.4', 'gauss4'))
        with self.assertRaises(UnsupportedOperationError):
            run_replicates(param, self.sample, 'smooth', 'refit', 3, RngStream(6))

        param = AverageDensity('onestep', parse_nuisance('fixed:0.4'))
        scheme = parse_scheme('smooth:silverman', 'gauss4')
        with self.assertRaises(UnsupportedOperationError):
            run_replicates(param, self.sample, scheme, 'refit', 3, RngStream(7))

    def test_gcomp(self):
        data = GcompDGP().draw(200, RngStream(8))
        param = GComputation('onestep')
        report = param.report(param.fit(data))

        replicates = run_replicates(param, data, 'empirical', 'refit', 5, RngStream(9))

        self.assertEqual(replicates.B, 5)
        self.assertEqual(replicates.center, report.psi_hat)

    def test_invalid(self):
        param = AverageDensity('onestep', parse_nuisance('fixed:0.4'))

        with self.assertRaises(DomainError):
            run_replicates(param, self.sample, 'empirical', 'refit', 0, RngStream(0))

    def test_failures(self):
        with self.assertRaises(ReplicateFailureError) as context:
            run_replicates(
                _FailingParameter(), self.sample, 'empirical', 'refit', 10, RngStream(0)
            )

        self.assertEqual(context.exception.failures, 10)
        self.assertEqual(context.exception.total, 10)


class TestConditionalLimit(unittest.TestCase):
    """Bootstrap replicates are asymptotically normal given the data."""

    def test_fixed_onestep(self):
        # sqrt(n) (psi* - center) / sigma_hat is approximately standard normal.
        n = 500
        sample = _normal_sample(12, n)
        param = AverageDensity('onestep', parse_nuisance('fixed:0.4'))
        fit_ = param.fit(sample)
        report = param.report(fit_)

        replicates = run_replicates(
            param, sample, 'empirical', 'fixed', 2000, RngStream(13), fit=fit_
        )
        z = math.sqrt(n) * (replicates.psi_star - replicates.center) / report.sigma_hat

        self.assertEqual(replicates.n_invalid, 0)
        self.assertGreater(kstest(z, 'norm').pvalue, 1e-3)
