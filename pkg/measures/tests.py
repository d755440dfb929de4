"""
Tests for Measures app empirical measures and the truncated metric
"""

from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import InsufficientDepth, InvalidParameters, NonPeriodicMeasure, WindowOverrun
from core.factories import CylinderFunctionFactory, LegalWordFactory, WordFactory
from core.test_utils import BaseTestCase
from measures.empirical import empirical_measure, integrate, periodic_measure
from measures.metric import (
    MetricTruncation,
    accumulation_profile,
    kappa_controlled_certify,
    rho_distance,
    within,
)
from shiftspace.subshifts import PaperShift
from words.observables import CylinderFunction, birkhoff_average
from words.sequences import Alphabet, Word

TERNARY = Alphabet()

long_lists = st.lists(st.sampled_from((-1, 0, 1)), min_size=30, max_size=80)


class EmpiricalMeasureTests(BaseTestCase):
    """Test cases for empirical_measure and periodic_measure"""

    def test_zero_segment(self):
        """Test 0^n gives the point mass at 0^∞"""
        mu = empirical_measure(Word.zeros(20), 15, 3)
        for d in range(1, 4):
            self.assertEqual(mu.freq(Word.zeros(d)), 1)
            self.assertEqual(mu.frequencies(d).sum(), 1)
        self.assertEqual(mu.freq('p'), 0)

    def test_period_two(self):
        """Test (10)^∞ gives frequencies 1/2"""
        mu = empirical_measure(Word((1, 0)) * 10, 10, 1)
        self.assertEqual(mu.freq('p'), Fraction(1, 2))
        self.assertEqual(mu.freq('0'), Fraction(1, 2))

    def test_frequency_table_invariants(self):
        """Test frequencies sum to one per depth and marginals agree"""
        word = WordFactory(length=120)
        mu = empirical_measure(word, 100, 4)
        for d in range(1, 5):
            self.assertAlmostEqual(mu.frequencies(d).sum(), 1.0, places=12)
            self.assertTrue(((mu.frequencies(d) >= 0) & (mu.frequencies(d) <= 1)).all())
        self.assertLessEqual(mu.max_marginal_defect, 4 / 100)

    def test_window_overrun(self):
        """Test n + D - 1 beyond the word"""
        with self.assertRaises(WindowOverrun):
            empirical_measure(Word.zeros(10), 9, 3)
        with self.assertRaises(InvalidParameters):
            empirical_measure(Word.zeros(10), 0, 3)

    def test_cylinder_longer_than_depth(self):
        """Test querying beyond the depth"""
        mu = empirical_measure(Word.zeros(10), 5, 2)
        with self.assertRaises(InsufficientDepth):
            mu.freq('000')

    def test_periodic_measure_is_rotation_invariant(self):
        """Test every rotation of a block gives the same measure"""
        block = Word((1, 1, 0, 0, 0, -1, 0, 0))
        reference = periodic_measure(block, 4)
        for shift in range(1, len(block)):
            rotated = block[shift:] + block[:shift]
            other = periodic_measure(rotated, 4)
            for d in range(4):
                self.assertTrue(np.array_equal(reference.counts[d], other.counts[d]))
        self.assertTrue(reference.periodic)
        self.assertEqual(reference.max_marginal_defect, 0)

    def test_to_dict(self):
        """Test the JSON export keeps exact frequencies"""
        data = periodic_measure(Word((1, 0, 0)), 2).to_dict()
        self.assertEqual(data['depth'], 2)
        self.assertIn({'word': 'p', 'freq': '1/3'}, data['entries'])
        self.assertIn({'word': '00', 'freq': '1/3'}, data['entries'])


class IntegrateTests(BaseTestCase):
    """Test cases for integrate"""

    @settings(max_examples=50, derandomize=True, deadline=None)
    @given(long_lists)
    def test_integral_is_birkhoff_average(self, symbols):
        """Test ∫f d(mu_n) equals the time average"""
        word = Word(symbols)
        f = CylinderFunction.from_values(TERNARY, 3, [(i % 7) - 3 for i in range(27)])
        n = len(word) - 5
        mu = empirical_measure(word, n, 4)
        self.assertAlmostEqual(integrate(f, mu), birkhoff_average(f, word, n), delta=1e-12)
        self.assertEqual(float(integrate(f, mu, exact=True)), integrate(f, mu))

    def test_window_exceeds_depth(self):
        """Test observables wider than the measure"""
        f = CylinderFunctionFactory(window=3)
        mu = empirical_measure(Word.zeros(10), 5, 2)
        with self.assertRaises(InsufficientDepth):
            integrate(f, mu)


class RhoDistanceTests(BaseTestCase):
    """Test cases for rho_distance"""

    def test_enumeration_order(self):
        """Test cylinders are listed in length-lex order"""
        trunc = MetricTruncation(5)
        self.assertEqual([tuple(c) for c in trunc.cylinders], [(-1,), (0,), (1,), (-1, -1), (-1, 0)])
        self.assertEqual(trunc.max_length, 2)

    def test_point_masses(self):
        """Test the hand-computed distance between 1^∞ and (-1)^∞"""
        mu = periodic_measure(Word((1,)), 1)
        nu = periodic_measure(Word((-1,)), 1)
        value, tail = rho_distance(mu, nu, MetricTruncation(3))
        self.assertEqual(value, 0.625)
        self.assertEqual(tail, 0.125)

    def test_distance_to_self(self):
        """Test rho(mu, mu) = 0"""
        mu = empirical_measure(WordFactory(length=60), 50, 3)
        self.assertEqual(rho_distance(mu, mu, MetricTruncation(20))[0], 0)

    def test_insufficient_depth(self):
        """Test measures shallower than the truncation"""
        mu = periodic_measure(Word((1,)), 1)
        with self.assertRaises(InsufficientDepth):
            rho_distance(mu, mu, MetricTruncation(4))

    def test_symmetry_and_triangle(self):
        """Test metric axioms on seeded random triples"""
        trunc = MetricTruncation(12)
        for _ in range(100):
            mu, nu, sigma = (
                empirical_measure(WordFactory(length=40), 30, 2) for _ in range(3)
            )
            ab, tail = rho_distance(mu, nu, trunc)
            self.assertEqual(ab, rho_distance(nu, mu, trunc)[0])
            bc, _ = rho_distance(nu, sigma, trunc)
            ac, _ = rho_distance(mu, sigma, trunc)
            self.assertLessEqual(ac, ab + bc + 2 * tail)

    def test_within(self):
        """Test the neighbourhood check accounts for the tail"""
        mu = periodic_measure(Word((1,)), 1)
        nu = periodic_measure(Word((-1,)), 1)
        trunc = MetricTruncation(3)
        self.assertFalse(within(mu, nu, 0.7, trunc))
        self.assertTrue(within(mu, nu, 0.76, trunc))
        self.assertTrue(within(mu, mu, 0.2, trunc))


class AccumulationProfileTests(BaseTestCase):
    """Test cases for accumulation_profile"""

    def test_single_checkpoint(self):
        """Test one checkpoint has zero dispersion"""
        profile = accumulation_profile(WordFactory(length=50), [40], 2, MetricTruncation(12))
        self.assertEqual(profile.dispersion, 0)
        self.assertEqual(profile.rows(), [])

    def test_periodic_word_small_dispersion(self):
        """Test checkpoint measures of a periodic word stay together"""
        word = Word((1, 0, 0, -1, 0)) * 400
        trunc = MetricTruncation(12)
        profile = accumulation_profile(word, [500, 1000, 1500, 1990], 2, trunc)
        self.assertLessEqual(profile.dispersion, 2 * trunc.tail + 2 * 2 / 500)

    def test_oscillating_word_disperses(self):
        """Test alternating long runs give distant checkpoint measures"""
        word = Word.constant(1, 10) + Word.constant(-1, 90) + Word.constant(1, 900)
        profile = accumulation_profile(word, [10, 100, 999], 1, MetricTruncation(3))
        self.assertGreater(profile.dispersion, 0.4)

    def test_checkpoints_must_increase(self):
        """Test unordered checkpoints are rejected"""
        with self.assertRaises(InvalidParameters):
            accumulation_profile(Word.zeros(20), [10, 5], 1, MetricTruncation(3))


class KappaControlledTests(BaseTestCase):
    """Test cases for kappa_controlled_certify"""

    def test_coordinate_on_paper_shift(self):
        """Test the two signed periodic points certify kappa = 0.3"""
        shift = PaperShift('1/4')
        gap = shift.m(1) + 1
        f = CylinderFunction.coordinate(TERNARY)
        plus = periodic_measure(Word((1,)) + Word.zeros(gap), 2)
        minus = periodic_measure(Word((-1,)) + Word.zeros(gap), 2)
        self.assertEqual(integrate(f, plus, exact=True) - integrate(f, minus, exact=True), Fraction(2, 3))
        self.assertTrue(kappa_controlled_certify(f, [plus, minus], 0.3))
        self.assertFalse(kappa_controlled_certify(f, [plus, minus], Fraction(1, 3)))

    def test_constant_never_certified(self):
        """Test constant observables"""
        f = CylinderFunction.constant(TERNARY, 2)
        measures = [periodic_measure(Word((1,)), 1), periodic_measure(Word((-1, 0)), 1)]
        for kappa in (0.01, 0.5, 1):
            self.assertFalse(kappa_controlled_certify(f, measures, kappa))

    def test_single_measure(self):
        """Test a single measure has zero spread"""
        f = CylinderFunction.coordinate(TERNARY)
        self.assertFalse(kappa_controlled_certify(f, [periodic_measure(Word((1,)), 1)], 0.1))

    def test_non_periodic_rejected(self):
        """Test sampled measures are not accepted"""
        f = CylinderFunction.coordinate(TERNARY)
        word = LegalWordFactory(length=30)
        with self.assertRaises(NonPeriodicMeasure):
            kappa_controlled_certify(f, [empirical_measure(word, 20, 2)], 0.1)
