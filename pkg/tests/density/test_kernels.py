"""Unit tests for kernel functions."""

import math
import unittest

import numpy as np

from scipy.integrate import quad

from bootlin.density import GAUSSIAN
from bootlin.density import GAUSSIAN_FOURTH_ORDER
from bootlin.density import get_kernel
from bootlin.errors import DomainError
from bootlin.errors import UnsupportedOperationError
from bootlin.prng import RngStream


class TestGaussianKernel(unittest.TestCase):
    """Values and moments of the Gaussian kernel."""

    def test_moments(self):
        # Moments of the standard normal up to order six.
        for j, expected in enumerate([1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0]):
            value, _ = quad(lambda u: float(u**j * GAUSSIAN(u)), -np.inf, np.inf)
            self.assertAlmostEqual(value, expected, delta=1e-6)

        mass, _ = quad(lambda u: float(GAUSSIAN.self_convolution(u)), -np.inf, np.inf)
        self.assertAlmostEqual(mass, 1.0, delta=1e-7)

    def test_values(self):
        self.assertAlmostEqual(float(GAUSSIAN(0.0)), 0.3989422804, places=10)
        self.assertAlmostEqual(
            float(GAUSSIAN.self_convolution(0.0)), 1.0 / (2.0 * math.sqrt(math.pi)), places=12
        )

        # Scaling by h = 2 halves the peak.
        self.assertAlmostEqual(
            float(GAUSSIAN.scaled(0.0, 2.0)), 0.5 * float(GAUSSIAN(0.0)), places=12
        )

    def test_self_convolution(self):
        for u in [0.0, 0.7, 2.5]:
            value, _ = quad(lambda t: float(GAUSSIAN(t) * GAUSSIAN(u - t)), -np.inf, np.inf)
            self.assertAlmostEqual(float(GAUSSIAN.self_convolution(u)), value, places=10)

    def test_sampling(self):
        self.assertTrue(GAUSSIAN.supports_sampling)
        noise = GAUSSIAN.sample_noise(RngStream(0), 10000)

        self.assertEqual(len(noise), 10000)
        self.assertAlmostEqual(float(np.var(noise)), 1.0, delta=0.05)

        # Fraction of standard normal noise within one unit of zero.
        inside = np.mean(np.abs(GAUSSIAN.sample_noise(RngStream(1), 100000)) <= 1.0)
        self.assertAlmostEqual(float(inside), 0.6827, delta=0.005)


class TestFourthOrderKernel(unittest.TestCase):
    """The fourth-order kernel integrates to one and is signed."""

    def test_moments(self):
        K = GAUSSIAN_FOURTH_ORDER

        # With K(u) = (3 - u^2) phi(u) / 2, the moments follow from those of
        # the standard normal.
        for j, expected in enumerate([1.0, 0.0, 0.0, 0.0, -3.0, 0.0, -30.0]):
            value, _ = quad(lambda u: float(u**j * K(u)), -np.inf, np.inf)
            self.assertAlmostEqual(value, expected, delta=1e-6)

        mass, _ = quad(lambda u: float(K.self_convolution(u)), -np.inf, np.inf)
        self.assertAlmostEqual(mass, 1.0, delta=1e-7)

        self.assertLess(float(K(2.0)), 0.0)
        self.assertEqual(K.order, 4)

    def test_self_convolution(self):
        K = GAUSSIAN_FOURTH_ORDER

        self.assertAlmostEqual(
            float(K.self_convolution(0.0)),
            27.0 / 16.0 / (2.0 * math.sqrt(math.pi)),
            places=12
        )

        for u in [0.0, 0.5, 1.7, 4.0]:
            value, _ = quad(lambda t: float(K(t) * K(u - t)), -np.inf, np.inf)
            self.assertAlmostEqual(float(K.self_convolution(u)), value, places=10)

    def test_sampling(self):
        self.assertFalse(GAUSSIAN_FOURTH_ORDER.supports_sampling)

        with self.assertRaises(UnsupportedOperationError):
            GAUSSIAN_FOURTH_ORDER.sample_noise(RngStream(0), 10)


class TestRegistry(unittest.TestCase):
    """Kernels are looked up by their identifiers."""

    def test(self):
        self.assertIs(get_kernel('gauss'), GAUSSIAN)
        self.assertIs(get_kernel('gauss4'), GAUSSIAN_FOURTH_ORDER)
        self.assertIs(get_kernel(GAUSSIAN), GAUSSIAN)

        with self.assertRaises(DomainError):
            get_kernel('epanechnikov')
