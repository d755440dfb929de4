"""
Tests for Gluing app connecting gaps and the approximate-product falsifier
"""

from fractions import Fraction

from django.conf import settings
from django.test import override_settings

from core.exceptions import BudgetExceeded, IllegalWord, InvalidParameters
from core.factories import LegalWordFactory
from core.test_utils import BaseTestCase
from gluing.connect import (
    gap_is_monotone_from,
    head_classes,
    minimal_gap,
    tail_classes,
    verify_m_transitivity,
)
from gluing.falsifier import app_falsifier, falsifier_words, hamming_variants, search_size
from shiftspace.language import count_language
from shiftspace.subshifts import FiniteTypeShift, FullShift, GapShift, PaperShift
from words.sequences import Word

KAPPAS = ('1/4', '1/2', '1/1')


def brute_minimal_gap(shift, w, u, v_max):
    """Scan v = 0, 1, ... on the full words"""
    for v in range(v_max + 1):
        if shift.is_legal(w + Word.zeros(v) + u):
            return v
    return None


class MinimalGapTests(BaseTestCase):
    """Test cases for minimal_gap"""

    def test_same_sign_needs_no_gap(self):
        """Test (1) then (1) glue directly"""
        self.assertEqual(minimal_gap(PaperShift('1/4'), Word((1,)), Word((1,))), 0)

    def test_minimal_gap_law(self):
        """Test minimal_gap((1), (-1)^n) = floor(kappa n) + 2"""
        for kappa in KAPPAS:
            shift = PaperShift(kappa)
            for n in range(1, 31):
                expected = int(Fraction(kappa) * n) + 2
                self.assertEqual(
                    minimal_gap(shift, Word((1,)), Word.constant(-1, n)), expected,
                    f'kappa={kappa} n={n}',
                )

    def test_full_shift_gap_is_zero(self):
        """Test the full shift glues anything directly"""
        shift = FullShift(3)
        self.assertEqual(minimal_gap(shift, Word((1, -1)), Word((-1, 1, 0))), 0)

    def test_illegal_input_rejected(self):
        """Test illegal w or u"""
        with self.assertRaises(IllegalWord):
            minimal_gap(PaperShift('1/1'), Word((1, -1)), Word((1,)))
        with self.assertRaises(IllegalWord):
            minimal_gap(PaperShift('1/1'), Word((1,)), Word((1, 0, 1)))

    def test_absent_when_v_max_too_small(self):
        """Test no gap is found below the requirement"""
        self.assertIsNone(minimal_gap(PaperShift('1/1'), Word((1,)), Word.constant(-1, 5), v_max=6))
        self.assertEqual(minimal_gap(PaperShift('1/1'), Word((1,)), Word.constant(-1, 5), v_max=7), 7)

    def test_agrees_with_full_word_scan(self):
        """Test context-based gaps against scanning the full words"""
        for shift in (PaperShift('1/4'), PaperShift('1/1'), GapShift(3)):
            for _ in range(60):
                w = LegalWordFactory(length=9, shift=shift)
                u = LegalWordFactory(length=7, shift=shift)
                bound = shift.gap_bound(len(u))
                gap = minimal_gap(shift, w, u)
                self.assertEqual(gap, brute_minimal_gap(shift, w, u, bound))
                self.assertIsNotNone(gap)
                start = gap if gap else bound
                self.assertTrue(gap_is_monotone_from(shift, w, u, start, bound + 4))

    def test_gap_monotone_only_from_one(self):
        """Test (1),(1) is legal at v = 0 but not at v = 1"""
        shift = PaperShift('1/1')
        self.assertTrue(shift.is_legal(Word((1, 1))))
        self.assertFalse(shift.is_legal(Word((1, 0, 1))))
        self.assertFalse(gap_is_monotone_from(shift, Word((1,)), Word((1,)), 0, 3))
        self.assertTrue(gap_is_monotone_from(shift, Word((1,)), Word((1,)), 1 + shift.m(1), 12))

    def test_sft_linear_scan(self):
        """Test non-monotone SFT gaps are found by linear scan"""
        shift = FiniteTypeShift(['p0p', 'p00p'])
        self.assertEqual(minimal_gap(shift, Word((1,)), Word((1,))), 0)
        shift = FiniteTypeShift(['pp', 'p0p'])
        self.assertEqual(minimal_gap(shift, Word((1,)), Word((1,))), 2)


class ContextClassTests(BaseTestCase):
    """Test cases for grouping words by junction context"""

    def test_head_class_multiplicities_sum_to_count(self):
        """Test head classes partition L_n"""
        for shift in (PaperShift('1/4'), GapShift(2), FullShift(3), FiniteTypeShift(['pp'])):
            for n in (1, 4, 7):
                classes = head_classes(shift, n)
                self.assertEqual(
                    sum(count for count, _ in classes.values()),
                    count_language(shift, n).count,
                )
                for head, (_, first) in classes.items():
                    self.assertEqual(len(first), n)
                    self.assertTrue(shift.is_legal(first))
                    self.assertEqual(shift.head_context(first), head)

    def test_tail_class_multiplicities(self):
        """Test tail classes partition L_1..L_w"""
        shift = PaperShift('1/2')
        classes = tail_classes(shift, 5)
        total = sum(count_language(shift, k).count for k in range(1, 6))
        self.assertEqual(sum(count for count, _ in classes.values()), total)


class VerifyTransitivityTests(BaseTestCase):
    """Test cases for verify_m_transitivity"""

    def test_exhaustive_bound_quarter(self):
        """Test every pair with |w|, |u| <= 8 meets 1 + m(|u|) at kappa = 1/4"""
        report = verify_m_transitivity(PaperShift('1/4'), 8)
        self.assertTrue(report.passed, report.failures[:3])
        self.assertEqual(report.mode, 'exhaustive')
        self.assertEqual(report.per_length[8].max_ratio, Fraction(1, 2))
        self.assertLessEqual(abs(report.per_length[8].max_ratio - Fraction(1, 4)), Fraction(2, 8))
        self.assertEqual(report.max_min_gap, 4)

    def test_exhaustive_bound_all_kappas(self):
        """Test the gap bound for every built-in kappa"""
        for kappa in KAPPAS:
            report = verify_m_transitivity(PaperShift(kappa), 8)
            self.assertTrue(report.passed, kappa)
            shift = PaperShift(kappa)
            for n, stats in report.per_length.items():
                self.assertLessEqual(stats.max_gap, 1 + shift.m(n))

    def test_witnesses_reverify(self):
        """Test recorded witnesses are tight"""
        shift = PaperShift('1/2')
        report = verify_m_transitivity(shift, 6, w_max=5)
        self.assertEqual(len(report.witnesses), 6)
        for witness in report.witnesses:
            self.assertTrue(witness.reverify(shift))

    def test_ratio_at_sixteen(self):
        """Test the max ratio at |u| = 16 lies within 2/16 of kappa"""
        report = verify_m_transitivity(PaperShift('1/4'), 16, w_max=4)
        ratio = report.per_length[16].max_ratio
        self.assertLessEqual(abs(ratio - Fraction(1, 4)), Fraction(2, 16))

    def test_full_shift(self):
        """Test the full shift never needs a gap"""
        report = verify_m_transitivity(FullShift(3), 5)
        self.assertEqual(report.max_min_gap, 0)
        total = sum(3 ** k for k in range(1, 6))
        self.assertEqual(report.pairs_tested, total * total)

    def test_sampled_mode_is_seeded(self):
        """Test sampled verification is reproducible"""
        shift = PaperShift('1/4')
        first = verify_m_transitivity(shift, 20, sample=50, seed=11)
        second = verify_m_transitivity(shift, 20, sample=50, seed=11)
        self.assertEqual(first.mode, 'sampled')
        self.assertEqual(first.pairs_tested, 50)
        self.assertTrue(first.passed)
        self.assertEqual(first.to_dict(), second.to_dict())

    @override_settings(ERGOLAB={**settings.ERGOLAB, 'THREADS': 3})
    def test_threads_do_not_change_report(self):
        """Test the report is independent of the thread count"""
        shift = PaperShift('1/2')
        self.assertEqual(
            verify_m_transitivity(shift, 6).to_dict(),
            verify_m_transitivity(shift, 6, threads=1).to_dict(),
        )

    def test_witness_family_ratio(self):
        """Test |gap/n - kappa| <= 2/n for w = (1), u = (-1)^200"""
        shift = PaperShift('1/1')
        gap = minimal_gap(shift, Word((1,)), Word.constant(-1, 200))
        self.assertEqual(gap, 202)
        self.assertLessEqual(abs(Fraction(gap, 200) - 1), Fraction(2, 200))


class AppFalsifierTests(BaseTestCase):
    """Test cases for app_falsifier"""

    def test_falsifier_pair(self):
        """Test the starting words"""
        w, u = falsifier_words(6, 1)
        self.assertEqual(w, (1, 1, 1, 1, 0, 0))
        self.assertEqual(u, (1,) * 6)

    def test_hamming_variants(self):
        """Test variant counts within radius 1"""
        variants = list(hamming_variants(Word((1, 1, 0)), 1, (-1, 0, 1)))
        self.assertEqual(len(variants), 1 + 3 * 2)
        self.assertEqual(variants[0], (0, Word((1, 1, 0))))

    def test_no_witness_for_paper_shift(self):
        """Test PaperShift(1) has no gluing with f = g = 1 at n = 20"""
        self.assertIsNone(app_falsifier(PaperShift('1/1'), 20, 1, 1))

    def test_control_with_long_connector(self):
        """Test g = 0 with a long connector finds a witness"""
        shift = PaperShift('1/1')
        witness = app_falsifier(shift, 4, 12, 0)
        self.assertIsNotNone(witness)
        self.assertTrue(shift.is_legal(witness.word))
        self.assertLessEqual(len(witness.connector), 12)
        self.assertEqual(witness.w_changes, 0)
        self.assertEqual(witness.u_changes, 0)

    def test_full_shift_trivial_witness(self):
        """Test the full shift glues with no modification"""
        witness = app_falsifier(FullShift(3), 10, 2, 1)
        self.assertEqual(len(witness.connector), 0)
        self.assertEqual(witness.w_changes, 0)
        self.assertEqual(witness.u_changes, 0)

    def test_preconditions(self):
        """Test n >= 2g + 2 and the search budget"""
        with self.assertRaises(InvalidParameters):
            app_falsifier(PaperShift('1/1'), 5, 1, 2)
        self.assertGreater(search_size(40, 20, 3, 3), settings.ERGOLAB['SEARCH_BUDGET'])
        with self.assertRaises(BudgetExceeded):
            app_falsifier(PaperShift('1/1'), 40, 20, 3)

    @override_settings(ERGOLAB={**settings.ERGOLAB, 'THREADS': 4})
    def test_threads_pick_same_witness(self):
        """Test the first witness does not depend on threads"""
        shift = PaperShift('1/4')
        self.assertEqual(app_falsifier(shift, 6, 6, 1), app_falsifier(shift, 6, 6, 1, threads=1))
