"""
Tests for Words app observables and Birkhoff averages
"""

import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import InvalidParameters, WindowOverrun
from core.factories import CylinderFunctionFactory, WordFactory
from core.test_utils import BaseTestCase
from words.observables import (
    CylinderFunction,
    birkhoff_average,
    birkhoff_averages,
    evaluate,
    exact_birkhoff_average,
    irregularity_gap,
)
from words.sequences import Alphabet, Word

TERNARY = Alphabet()

symbol_lists = st.lists(st.sampled_from((-1, 0, 1)), min_size=4, max_size=60)


class CylinderFunctionTests(BaseTestCase):
    """Test cases for CylinderFunction construction"""

    def test_table_must_be_total(self):
        """Test tables of the wrong size are rejected"""
        with self.assertRaises(InvalidParameters):
            CylinderFunction.from_values(TERNARY, 2, [1, 2, 3])
        with self.assertRaises(InvalidParameters):
            CylinderFunction.from_mapping(TERNARY, 1, {'p': 1, '0': 0})

    def test_window_must_be_positive(self):
        """Test window 0 is rejected"""
        with self.assertRaises(InvalidParameters):
            CylinderFunction.from_values(TERNARY, 0, [1])

    def test_norm_sup_inf(self):
        """Test cached sup, inf and norm"""
        f = CylinderFunction.from_values(TERNARY, 1, [-4, 1, 2])
        self.assertEqual(f.sup, 2)
        self.assertEqual(f.inf, -4)
        self.assertEqual(f.norm, 4)
        self.assertEqual(f.oscillation, 6)

    def test_from_json_with_default(self):
        """Test JSON tables with a default value"""
        payload = {'window': 2, 'entries': [{'word': 'pp', 'value': 1}], 'default': 0}
        f = CylinderFunction.from_json(payload)
        self.assertEqual(evaluate(f, Word((1, 1, 0)), 0), 1)
        self.assertEqual(evaluate(f, Word((1, 1, 0)), 1), 0)

    def test_to_dict_keeps_exact_values(self):
        """Test rational tables export as exact numbers"""
        f = CylinderFunction.from_values(TERNARY, 1, [Fraction(-1, 2), 0, '1/3'])
        entries = f.to_dict()['entries']
        self.assertEqual(entries[0], {'word': 'm', 'value': '-1/2'})
        self.assertEqual(entries[1]['value'], 0)

    def test_widen_preserves_values(self):
        """Test reading an observable through a longer window"""
        f = CylinderFunction.coordinate(TERNARY)
        wide = f.widen(3)
        word = WordFactory(length=30)
        self.assertAlmostEqual(
            birkhoff_average(f, word, 28), birkhoff_average(wide, word, 28), places=12
        )
        with self.assertRaises(InvalidParameters):
            wide.widen(2)


class EvaluateTests(BaseTestCase):
    """Test cases for evaluate"""

    def test_constant_function(self):
        """Test a constant observable evaluates to its constant"""
        f = CylinderFunction.constant(TERNARY, 5, window=3)
        self.assertEqual(evaluate(f, Word((1, 0, -1, 1)), 1), 5)

    def test_coordinate(self):
        """Test the coordinate observable reads the symbol"""
        f = CylinderFunction.coordinate(TERNARY)
        self.assertEqual(evaluate(f, Word((1, 0, -1)), 2), -1)

    def test_cylinder_indicator(self):
        """Test the indicator of [1, 1]"""
        f = CylinderFunction.indicator(TERNARY, 'pp')
        word = Word((1, 1, 0))
        self.assertEqual(evaluate(f, word, 0), 1)
        self.assertEqual(evaluate(f, word, 1), 0)

    def test_window_overrun(self):
        """Test evaluation past the end of the word"""
        f = CylinderFunction.indicator(TERNARY, 'pp')
        with self.assertRaises(WindowOverrun):
            evaluate(f, Word((1, 1, 0)), 2)


class BirkhoffAverageTests(BaseTestCase):
    """Test cases for Birkhoff averages"""

    def test_constant_average(self):
        """Test the average of a constant"""
        f = CylinderFunction.constant(TERNARY, 3, window=2)
        self.assertEqual(birkhoff_average(f, WordFactory(length=40), 39), 3)

    def test_balanced_word(self):
        """Test a balanced word averages to zero"""
        f = CylinderFunction.coordinate(TERNARY)
        self.assertEqual(birkhoff_average(f, Word((1, 1, -1, -1)), 4), 0)

    def test_period_two_indicator(self):
        """Test the frequency of 1 in (10)^∞"""
        f = CylinderFunction.indicator(TERNARY, 'p')
        word = Word((1, 0)) * 5
        self.assertEqual(birkhoff_average(f, word, 10), 0.5)
        self.assertEqual(exact_birkhoff_average(f, word, 10), Fraction(1, 2))

    def test_window_overrun(self):
        """Test n + L - 1 beyond the word"""
        f = CylinderFunction.indicator(TERNARY, 'pp')
        with self.assertRaises(WindowOverrun):
            birkhoff_average(f, Word((1, 1, 1)), 3)
        with self.assertRaises(InvalidParameters):
            birkhoff_average(f, Word((1, 1, 1)), 0)

    def test_exact_average_matches_float(self):
        """Test the rational and float averages agree"""
        f = CylinderFunctionFactory(window=3)
        word = WordFactory(length=200)
        exact = exact_birkhoff_average(f, word, 150)
        self.assertAlmostEqual(float(exact), birkhoff_average(f, word, 150), places=12)

    def test_exact_average_needs_rational_table(self):
        """Test float tables have no exact average"""
        f = CylinderFunction.from_values(TERNARY, 1, [0.1, 0.2, math.pi])
        with self.assertRaises(InvalidParameters):
            exact_birkhoff_average(f, Word((1,)), 1)

    @settings(max_examples=60, derandomize=True, deadline=None)
    @given(symbol_lists, st.integers(-5, 5), st.integers(-5, 5))
    def test_affine_in_observable(self, symbols, a, b):
        """Test average(a f + b g) = a average(f) + b average(g)"""
        word = Word(symbols)
        f = CylinderFunction.from_values(TERNARY, 2, [((i * 7) % 5) - 2 for i in range(9)])
        g = CylinderFunction.from_values(TERNARY, 2, [((i * 3) % 4) - 1 for i in range(9)])
        n = len(word) - 1
        combined = f.combine(a, g, b)
        expected = a * birkhoff_average(f, word, n) + b * birkhoff_average(g, word, n)
        self.assertAlmostEqual(birkhoff_average(combined, word, n), expected, delta=1e-12)

    @settings(max_examples=40, derandomize=True, deadline=None)
    @given(symbol_lists)
    def test_constant_one_averages_to_one(self, symbols):
        """Test the constant-1 observable"""
        word = Word(symbols)
        one = CylinderFunction.constant(TERNARY, 1, window=2)
        for n in range(1, len(word)):
            self.assertEqual(birkhoff_average(one, word, n), 1)


class IrregularityGapTests(BaseTestCase):
    """Test cases for irregularity_gap"""

    def test_constant_gap(self):
        """Test a constant observable has no gap"""
        f = CylinderFunction.constant(TERNARY, 2)
        self.assertEqual(irregularity_gap(f, WordFactory(length=50), 1, 50), (2, 2))

    def test_run_word(self):
        """Test 1^10 (-1)^90 over [10, 100]"""
        f = CylinderFunction.coordinate(TERNARY)
        word = Word.constant(1, 10) + Word.constant(-1, 90)
        lo, hi = irregularity_gap(f, word, 10, 100)
        self.assertAlmostEqual(lo, -0.8, places=12)
        self.assertEqual(hi, 1.0)

    def test_bad_range(self):
        """Test N1 < N0 is rejected"""
        f = CylinderFunction.coordinate(TERNARY)
        with self.assertRaises(InvalidParameters):
            irregularity_gap(f, Word((1, 1)), 2, 1)

    @settings(max_examples=40, derandomize=True, deadline=None)
    @given(symbol_lists)
    def test_gap_brackets_every_average(self, symbols):
        """Test lo <= average(n) <= hi for every n in range"""
        word = Word(symbols)
        f = CylinderFunction.from_values(TERNARY, 2, [i - 4 for i in range(9)])
        n_hi = len(word) - 1
        lo, hi = irregularity_gap(f, word, 1, n_hi)
        self.assertLessEqual(lo, hi)
        for n in range(1, n_hi + 1):
            average = birkhoff_average(f, word, n)
            self.assertLessEqual(lo, average)
            self.assertLessEqual(average, hi)

    def test_prefix_sums_match_direct_sums(self):
        """Test the vectorized averages against one-at-a-time averages"""
        f = CylinderFunctionFactory(window=2)
        word = WordFactory(length=80)
        averages = birkhoff_averages(f, word, 5, 70)
        for offset, n in enumerate(range(5, 71)):
            self.assertAlmostEqual(averages[offset], birkhoff_average(f, word, n), places=12)

    def test_gap_brackets_float_averages(self):
        """Test the bracket holds exactly for a non-integer table"""
        f = CylinderFunction.from_values(TERNARY, 2, [0.1 * i - 0.35 for i in range(9)])
        word = WordFactory(length=400)
        lo, hi = irregularity_gap(f, word, 1, 399)
        averages = birkhoff_averages(f, word, 1, 399)
        for n in range(1, 400):
            average = birkhoff_average(f, word, n)
            self.assertEqual(average, averages[n - 1])
            self.assertLessEqual(lo, average)
            self.assertLessEqual(average, hi)
