"""Unit tests for bandwidth selection."""

import unittest
import warnings

import numpy as np

from bootlin.density import Fixed
from bootlin.density import Sample
from bootlin.density import SheatherJones
from bootlin.density import Silverman
from bootlin.density import Undersmoothed
from bootlin.density import parse_bandwidth_rule
from bootlin.density import select_bandwidth
from bootlin.density import sheather_jones
from bootlin.density import silverman
from bootlin.errors import BandwidthFallbackWarning
from bootlin.errors import DegenerateDataError
from bootlin.errors import DomainError
from bootlin.errors import InsufficientDataError
from bootlin.prng import RngStream
from bootlin.prng import standard_normal


class TestSilverman(unittest.TestCase):
    """Silverman's rule on small data sets."""

    def test_value(self):
        # sd = 1.58, IQR = 2, so the IQR term 2 / 1.34 is the minimum.
        self.assertAlmostEqual(silverman([1.0, 2.0, 3.0, 4.0, 5.0]), 0.973585, places=5)

    def test_translation(self):
        x = standard_normal(RngStream(0), 50)
        self.assertAlmostEqual(silverman(x), silverman(x + 10.0), places=10)

    def test_errors(self):
        with self.assertRaises(InsufficientDataError):
            silverman([1.0, 2.0])

        with self.assertRaises(DegenerateDataError):
            silverman([1.0, 1.0, 1.0, 1.0])


class TestSheatherJones(unittest.TestCase):
    """Sheather--Jones on standard normal data."""

    def test_normal(self):
        x = standard_normal(RngStream(1), 500)

        with warnings.catch_warnings():
            warnings.simplefilter('error', BandwidthFallbackWarning)
            choice = sheather_jones(x)

        self.assertFalse(choice.fell_back)

        # For normal data, the rule should be of the same order as the
        # normal reference bandwidth 1.06 n^(-1/5).
        reference = 1.06 * 500**(-0.2)
        self.assertGreater(choice.h, 0.5 * reference)
        self.assertLess(choice.h, 2.0 * reference)

    def test_scale_equivariance(self):
        x = standard_normal(RngStream(2), 200)

        h_1 = sheather_jones(x).h
        h_2 = sheather_jones(3.0 * x).h

        self.assertAlmostEqual(h_2 / h_1, 3.0, places=6)

    def test_insufficient(self):
        with self.assertRaises(InsufficientDataError):
            sheather_jones([0.0])


class TestRules(unittest.TestCase):
    """Parsing and evaluation of rule identifiers."""

    def test_parse(self):
        self.assertEqual(parse_bandwidth_rule('silverman'), Silverman())
        self.assertEqual(parse_bandwidth_rule('sj'), SheatherJones())
        self.assertEqual(parse_bandwidth_rule('fixed:0.5'), Fixed(0.5))
        self.assertEqual(
            parse_bandwidth_rule('under:silverman:0.1'),
            Undersmoothed(Silverman(), 0.1)
        )

        for text in ['silverman', 'sj', 'fixed:0.5', 'under:sj:0.2']:
            self.assertEqual(str(parse_bandwidth_rule(text)), text)

    def test_invalid(self):
        for text in ['cv', 'fixed:x', 'fixed:-1', 'under:0.1', 'under:silverman:0']:
            with self.assertRaises(DomainError):
                parse_bandwidth_rule(text)

    def test_select(self):
        x = Sample(standard_normal(RngStream(3), 100))

        self.assertEqual(select_bandwidth('fixed:0.3', x).h, 0.3)
        self.assertAlmostEqual(
            select_bandwidth('under:silverman:0.1', x).h,
            silverman(x) / 100**0.1,
            places=12
        )

    def test_fixed_small_sample(self):
        # Fixed bandwidths do not depend on the data at all.
        self.assertEqual(select_bandwidth('fixed:1', [0.0]).h, 1.0)
