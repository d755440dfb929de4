"""
Tests for Shiftspace app language enumeration and entropy
"""

import itertools
import math

import numpy as np
from django.test import override_settings
from django.conf import settings

from core.exceptions import CapExceeded, InvalidParameters
from core.test_utils import BaseTestCase
from shiftspace.language import (
    count_language,
    entropy_estimate,
    growth_table,
    iter_language,
    periodic_point_legal,
    random_legal_word,
)
from shiftspace.oracles import literal_legal, naive_count, sgap_growth_root
from shiftspace.subshifts import FiniteTypeShift, FullShift, GapShift, PaperShift
from words.sequences import Word

BUILT_IN = (
    FullShift(3), PaperShift('1/4'), PaperShift('1/2'), PaperShift('1/1'),
    GapShift(2), FiniteTypeShift(['pp', 'mm']),
)


class CountLanguageTests(BaseTestCase):
    """Test cases for count_language"""

    def test_full_shift_counts(self):
        """Test |L_n| = 3^n on the full shift"""
        self.assertEqual(count_language(FullShift(3), 4).count, 81)
        self.assertEqual(count_language(FullShift(3), 0).count, 1)

    def test_paper_length_two(self):
        """Test only (1, -1) and (-1, 1) are excluded at n = 2"""
        result = count_language(PaperShift('1/1'), 2, listing=True)
        self.assertEqual(result.count, 7)
        self.assertNotIn(Word((1, -1)), result.words)
        self.assertNotIn(Word((-1, 1)), result.words)

    def test_counts_match_naive_oracle(self):
        """Test memoized counts equal enumerate-and-scan counts"""
        for shift in BUILT_IN:
            for n in range(0, 13):
                self.assertEqual(
                    count_language(shift, n).count, naive_count(shift, n), f'{shift!r} n={n}'
                )

    def test_listing_matches_count_and_is_sorted(self):
        """Test the listing mode"""
        for shift in BUILT_IN:
            result = count_language(shift, 6, listing=True)
            self.assertEqual(len(result.words), result.count)
            self.assertEqual(result.count, count_language(shift, 6).count)
            self.assertEqual(result.words, sorted(result.words))
            self.assertEqual(result.words, list(iter_language(shift, 6)))
            for word in result.words:
                self.assertTrue(shift.is_legal(word))

    def test_listing_matches_naive_filter(self):
        """Test listed words are exactly the literally legal words of alphabet^n"""
        for shift in BUILT_IN:
            for n in range(0, 9):
                expected = {
                    symbols for symbols in itertools.product(shift.alphabet.symbols, repeat=n)
                    if literal_legal(shift, symbols)
                }
                listed = [tuple(word) for word in count_language(shift, n, listing=True).words]
                self.assertEqual(len(listed), len(expected), f'{shift!r} n={n}')
                self.assertEqual(set(listed), expected, f'{shift!r} n={n}')

    @override_settings(ERGOLAB={**settings.ERGOLAB, 'THREADS': 4})
    def test_thread_count_does_not_change_results(self):
        """Test parallel enumeration merges deterministically"""
        shift = PaperShift('1/2')
        self.assertEqual(
            count_language(shift, 7, listing=True).words,
            count_language(shift, 7, listing=True, threads=1).words,
        )
        self.assertEqual(count_language(shift, 30).count, count_language(shift, 30, threads=1).count)

    def test_caps(self):
        """Test listing and counting caps"""
        cap = settings.ERGOLAB['ENUM_CAP']
        with self.assertRaises(CapExceeded):
            count_language(FullShift(3), cap + 1, listing=True)
        with self.assertRaises(CapExceeded):
            count_language(FullShift(3), settings.ERGOLAB['COUNT_CAP'] + 1)
        self.assertEqual(count_language(FullShift(3), cap + 1).count, 3 ** (cap + 1))

    def test_monotone_in_kappa(self):
        """Test larger kappa gives a smaller language"""
        for n in range(1, 11):
            small = set(count_language(PaperShift('1/4'), n, listing=True).words)
            large = set(count_language(PaperShift('1/1'), n, listing=True).words)
            self.assertTrue(large <= small)

    def test_paper_dominates_sgap(self):
        """Test |L_n(PaperShift(1))| >= |L_n(SGap(2))|"""
        rows_paper = growth_table(PaperShift('1/1'), 16)
        rows_sgap = growth_table(GapShift(2), 16)
        for paper, sgap in zip(rows_paper, rows_sgap):
            self.assertGreaterEqual(paper[1], sgap[1])


class EntropyTests(BaseTestCase):
    """Test cases for entropy_estimate"""

    def test_full_shift_entropy(self):
        """Test log|L_n|/n = log 3"""
        for n in (2, 5, 10):
            estimate = entropy_estimate(FullShift(3), n)
            self.assertAlmostEqual(estimate.log_growth, math.log(3), places=12)
            self.assertAlmostEqual(estimate.ratio, 3.0, places=12)
            self.assertTrue(estimate.certified)

    def test_sgap_growth_ratio(self):
        """Test the S-gap ratio approaches the root of x^3 - x^2 - 1"""
        root = sgap_growth_root(2)
        self.assertAlmostEqual(root ** 3 - root ** 2 - 1, 0, places=10)
        self.assertAlmostEqual(root, 1.4656, places=4)
        self.assertAlmostEqual(sgap_growth_root(1), (1 + math.sqrt(5)) / 2, places=12)
        self.assertAlmostEqual(sgap_growth_root(0), 2.0, places=12)
        estimate = entropy_estimate(GapShift(2), 16)
        self.assertLess(abs(estimate.ratio - root), 0.02)

    def test_paper_positive_entropy(self):
        """Test growth ratios of PaperShift(1) stay above 1.3"""
        estimate = entropy_estimate(PaperShift('1/1'), 17, delta=0.3, window=7)
        self.assertTrue(estimate.certified)
        for n, _, ratio, _ in estimate.rows[10:]:
            self.assertGreaterEqual(ratio, 1.3, f'n={n}')

    def test_zero_entropy_not_certified(self):
        """Test a shift with linear growth is not certified"""
        estimate = entropy_estimate(FiniteTypeShift(['m', 'p0', 'pm']), 30)
        self.assertFalse(estimate.certified)

    def test_n_must_be_at_least_two(self):
        """Test the precondition n >= 2"""
        with self.assertRaises(InvalidParameters):
            entropy_estimate(FullShift(3), 1)


class PeriodicPointTests(BaseTestCase):
    """Test cases for periodic_point_legal"""

    def test_single_one_with_long_gap(self):
        """Test (1 0^(m(1)+1))^∞ is legal"""
        for kappa in ('1/4', '1/1', '3/1'):
            shift = PaperShift(kappa)
            self.assertTrue(periodic_point_legal(shift, Word((1,)), shift.m(1) + 1))

    def test_short_gap_illegal(self):
        """Test (1 0)^∞ is illegal at kappa = 1"""
        self.assertFalse(periodic_point_legal(PaperShift('1/1'), Word((1,)), 1))

    def test_zero_fixed_point(self):
        """Test 0^∞ is legal"""
        self.assertTrue(periodic_point_legal(PaperShift('1/1'), Word.zeros(3), 0))

    def test_empty_block_rejected(self):
        """Test the block must be nonempty"""
        with self.assertRaises(InvalidParameters):
            periodic_point_legal(PaperShift('1/1'), Word.empty(), 2)

    def test_periodic_density(self):
        """Test w 0^(1+m(|w|)) repeats legally for random legal w"""
        rng = np.random.default_rng(7)
        for kappa in ('1/4', '1/1'):
            shift = PaperShift(kappa)
            for _ in range(100):
                word = random_legal_word(shift, int(rng.integers(1, 11)), rng)
                self.assertTrue(
                    periodic_point_legal(shift, word, 1 + shift.m(len(word))), repr(word)
                )

    def test_sft_uses_enough_repetitions(self):
        """Test long forbidden words against short periods"""
        shift = FiniteTypeShift(['p0p0p'])
        self.assertFalse(periodic_point_legal(shift, Word((1,)), 1))
        self.assertTrue(periodic_point_legal(shift, Word((1,)), 2))


class RandomLegalWordTests(BaseTestCase):
    """Test cases for random_legal_word"""

    def test_words_are_legal_and_seeded(self):
        """Test reproducibility from a seed"""
        shift = PaperShift('1/2')
        first = random_legal_word(shift, 40, 3)
        self.assertEqual(len(first), 40)
        self.assertTrue(shift.is_legal(first))
        self.assertEqual(first, random_legal_word(shift, 40, 3))
