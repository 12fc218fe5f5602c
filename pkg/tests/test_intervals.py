"""Unit tests for confidence interval constructions."""

import math
import unittest

import numpy as np

from bootlin.errors import DomainError
from bootlin.errors import StudentizationError
from bootlin.intervals import METHODS
from bootlin.intervals import Interval
from bootlin.intervals import IntervalSpec
from bootlin.intervals import bootstrap_wald
from bootlin.intervals import construct
from bootlin.intervals import efron
from bootlin.intervals import lower_quantile
from bootlin.intervals import percentile
from bootlin.intervals import percentile_t
from bootlin.intervals import wald
from bootlin.representations import EstimatorReport
from bootlin.representations import ReplicateSet


def _report(psi_hat=0.0, sigma_hat=1.0, n=100):
    return EstimatorReport(psi_hat, sigma_hat, psi_hat, np.zeros(n))


class TestLowerQuantile(unittest.TestCase):
    """Rank rule of the lower quantile."""

    def test(self):
        values = [4.0, 2.0, 1.0, 3.0]

        self.assertEqual(lower_quantile(values, 0.5), 2.0)
        self.assertEqual(lower_quantile(values, 0.51), 3.0)
        self.assertEqual(lower_quantile(values, 0.25), 1.0)
        self.assertEqual(lower_quantile(values, 1.0), 4.0)

    def test_constant(self):
        for p in [0.01, 0.3, 0.975, 1.0]:
            self.assertEqual(lower_quantile(np.full(7, 1.5), p), 1.5)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            lower_quantile([], 0.5)

        for p in [0.0, -0.1, 1.5]:
            with self.assertRaises(DomainError):
                lower_quantile([1.0, 2.0], p)


class TestSpec(unittest.TestCase):
    """Validation of interval specifications."""

    def test(self):
        spec = IntervalSpec.equi_tailed(0.9, 'perc')

        self.assertAlmostEqual(spec.alpha, 0.05, places=14)
        self.assertAlmostEqual(spec.level, 0.9, places=14)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            IntervalSpec(0.6, 0.5)

        with self.assertRaises(DomainError):
            IntervalSpec(0.0, 0.1)

        with self.assertRaises(DomainError):
            IntervalSpec(method='bca')

        with self.assertRaises(DomainError):
            IntervalSpec.equi_tailed(1.0)


class TestWald(unittest.TestCase):
    """Wald intervals."""

    def test(self):
        lo, hi = wald(_report(), IntervalSpec())

        self.assertAlmostEqual(lo, -0.1959964, places=7)
        self.assertAlmostEqual(hi, 0.1959964, places=7)

    def test_degenerate(self):
        interval = wald(_report(psi_hat=3.0, sigma_hat=0.0), IntervalSpec())
        self.assertEqual(interval, Interval(3.0, 3.0))

    def test_symmetric(self):
        interval = wald(_report(psi_hat=1.3, sigma_hat=0.7), IntervalSpec(0.1, 0.1))
        self.assertAlmostEqual(1.3 - interval.lo, interval.hi - 1.3, places=12)

    def test_sample_size(self):
        interval = wald(_report(), IntervalSpec(), n=400)
        self.assertAlmostEqual(interval.width, 2 * 0.0979982, places=6)


class TestBootstrapIntervals(unittest.TestCase):
    """Percentile, percentile-t, Efron, and bootstrap-Wald intervals."""

    def setUp(self):
        self.spec = IntervalSpec(0.25, 0.25)

    def test_percentile(self):
        reps = ReplicateSet([8.0, 9.0, 11.0, 12.0], np.ones(4), 10.0)
        interval = percentile(_report(psi_hat=10.0), reps, self.spec)

        self.assertEqual(interval, Interval(9.0, 12.0))

    def test_percentile_shift(self):
        reps = ReplicateSet([0.3, -1.2, 0.8, 2.5, -0.4], np.ones(5), 0.1)
        report = _report(psi_hat=0.2)

        original = percentile(report, reps, self.spec)
        shifted = percentile(report, reps.shift(4.0), self.spec)

        self.assertAlmostEqual(original.lo, shifted.lo, places=12)
        self.assertAlmostEqual(original.hi, shifted.hi, places=12)

    def test_percentile_center(self):
        # Deviations are taken with respect to the bootstrap center.
        reps = ReplicateSet([1.0, 2.0, 3.0, 4.0], np.ones(4), 2.0)
        interval = percentile(_report(psi_hat=0.0), reps, self.spec)

        self.assertEqual(interval, Interval(-1.0, 1.0))

    def test_degenerate(self):
        reps = ReplicateSet(np.full(5, 2.0), np.zeros(5), 2.0)
        report = _report(psi_hat=2.0, sigma_hat=0.0)

        self.assertEqual(percentile(report, reps, self.spec), Interval(2.0, 2.0))
        self.assertEqual(efron(reps, self.spec), Interval(2.0, 2.0))
        self.assertEqual(bootstrap_wald(report, reps, self.spec), Interval(2.0, 2.0))

    def test_percentile_t(self):
        psi_star = [8.0, 9.0, 11.0, 12.0]

        for sigma in [1.0, 2.0]:
            reps = ReplicateSet(psi_star, np.full(4, sigma), 10.0)
            report = _report(psi_hat=10.0, sigma_hat=sigma)

            self.assertEqual(
                percentile_t(report, reps, self.spec),
                percentile(report, reps, self.spec)
            )

    def test_studentization(self):
        reps = ReplicateSet([1.0, 2.0, 3.0], [1.0, 0.0, 1.0], 2.0)

        with self.assertRaises(StudentizationError) as context:
            percentile_t(_report(), reps, self.spec)

        self.assertEqual(context.exception.replicate, 1)

    def test_efron(self):
        reps = ReplicateSet([3.0, 1.0, 4.0, 2.0], np.ones(4), 2.5)

        self.assertEqual(efron(reps, self.spec), Interval(1.0, 3.0))
        self.assertEqual(efron(reps.shift(1.5), self.spec), Interval(2.5, 4.5))

    def test_symmetric(self):
        # Percentile and Efron intervals agree for symmetric replicates
        # centred at the estimate.
        reps = ReplicateSet([-2.0, -1.0, 0.0, 1.0, 2.0], np.ones(5), 0.0)
        spec = IntervalSpec(0.3, 0.3)

        self.assertEqual(percentile(_report(psi_hat=0.0), reps, spec), efron(reps, spec))

    def test_bootstrap_wald(self):
        reps = ReplicateSet([4.0, 6.0], np.ones(2), 5.0)
        interval = bootstrap_wald(_report(psi_hat=5.0, n=4), reps, IntervalSpec())

        self.assertAlmostEqual(interval.lo, 5.0 - 1.959964, places=6)
        self.assertAlmostEqual(interval.hi, 5.0 + 1.959964, places=6)

        with self.assertRaises(DomainError):
            bootstrap_wald(_report(), ReplicateSet([1.0], [1.0], 1.0), IntervalSpec())

    def test_invalid_replicates(self):
        reps = ReplicateSet([8.0, math.nan, 9.0, 11.0, 12.0], [1.0, math.nan, 1.0, 1.0, 1.0], 10.0)

        self.assertEqual(reps.n_invalid, 1)
        self.assertEqual(
            percentile(_report(psi_hat=10.0), reps, self.spec), Interval(9.0, 12.0)
        )


class TestConstruct(unittest.TestCase):
    """Dispatch by method name."""

    def test(self):
        reps = ReplicateSet([0.9, 1.1, 0.95, 1.05, 1.0], np.full(5, 0.5), 1.0)
        report = _report(psi_hat=1.0, sigma_hat=0.5, n=25)

        for method in METHODS:
            interval = construct(IntervalSpec(method=method), report, reps)
            self.assertLessEqual(interval.lo, interval.hi)

        self.assertEqual(
            construct(IntervalSpec(), report), wald(report, IntervalSpec())
        )

        with self.assertRaises(DomainError):
            construct(IntervalSpec(method='perc'), report)
