"""
Tests for Shiftspace app subshift definitions
"""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import AlphabetMismatch, InvalidParameters
from core.factories import LegalWordFactory, WordFactory
from core.test_utils import BaseTestCase
from shiftspace.oracles import brute_legal, literal_paper_legal
from shiftspace.subshifts import (
    FiniteTypeShift,
    FullShift,
    GapBudget,
    GapShift,
    PaperShift,
    build_subshift,
)
from words.sequences import Alphabet, Word

KAPPAS = ('1/4', '1/2', '1/1')

ternary_lists = st.lists(st.sampled_from((-1, 0, 1)), max_size=40)


class GapBudgetTests(BaseTestCase):
    """Test cases for GapBudget"""

    def test_m_is_exact(self):
        """Test m(n) = floor(kappa n) + 1 in rational arithmetic"""
        budget = GapBudget('1/4')
        self.assertEqual([budget.m(n) for n in range(9)], [1, 1, 1, 1, 2, 2, 2, 2, 3])
        self.assertEqual(GapBudget('1/1').m(200), 201)
        self.assertEqual(GapBudget(Fraction(1, 3)).m(3), 2)

    def test_m_array_agrees(self):
        """Test the vectorized m"""
        budget = GapBudget('2/3')
        self.assertEqual(list(budget.m_array(range(10))), [budget.m(n) for n in range(10)])

    def test_kappa_must_be_positive(self):
        """Test non-positive or unreadable kappa"""
        for value in ('0', '-1/2', 'abc', None):
            with self.assertRaises(InvalidParameters):
                GapBudget(value)

    def test_monotone_and_subadditive(self):
        """Test m is nondecreasing and m(a + b) <= m(a) + m(b)"""
        for kappa in KAPPAS + ('3/7',):
            budget = GapBudget(kappa)
            for a in range(40):
                self.assertLessEqual(budget.m(a), budget.m(a + 1))
                for b in range(40):
                    self.assertLessEqual(budget.m(a + b), budget.m(a) + budget.m(b))

    def test_merged_gap_identity(self):
        """Test legal gaps k_i >= m(j_i) + 1 merge into sum k >= m(sum j) + t"""
        budget = GapBudget('1/1')
        runs = [3, 5, 2]
        gaps = [budget.m(j) + 1 for j in runs]
        self.assertTrue(budget.merged_gap_holds(gaps, runs))
        self.assertFalse(budget.merged_gap_holds([1, 1, 1], runs))
        with self.assertRaises(InvalidParameters):
            budget.merged_gap_holds([1], [1, 2])


class PaperShiftTests(BaseTestCase):
    """Test cases for the PaperShift legality rules"""

    def test_opposite_signs_forbidden(self):
        """Test (1, -1) is illegal for every kappa"""
        for kappa in KAPPAS:
            self.assertIllegal(PaperShift(kappa), Word((1, -1)))
            self.assertIllegal(PaperShift(kappa), Word((-1, 1)))

    def test_empty_and_short_words(self):
        """Test the empty word and single symbols are legal"""
        shift = PaperShift('1/1')
        self.assertTrue(shift.is_legal(Word.empty()))
        for symbol in (-1, 0, 1):
            self.assertTrue(shift.is_legal(Word((symbol,))))

    def test_gap_threshold_family(self):
        """Test 1 0^(m(n)+1) (-1)^n is legal and 1 0^m(n) (-1)^n is not"""
        for kappa in KAPPAS:
            shift = PaperShift(kappa)
            for n in range(1, 9):
                m = shift.m(n)
                legal = Word((1,)) + Word.zeros(m + 1) + Word.constant(-1, n)
                illegal = Word((1,)) + Word.zeros(m) + Word.constant(-1, n)
                self.assertLegal(shift, legal, brute=True)
                self.assertIllegal(shift, illegal)
                self.assertFalse(brute_legal(shift, illegal))

    def test_boundary_zero_runs_unconstrained(self):
        """Test zero-runs touching an end impose nothing"""
        shift = PaperShift('1/1')
        self.assertLegal(shift, Word((0, 1, 1, 1, 1)))
        self.assertLegal(shift, Word((1, 1, 0)))
        self.assertLegal(shift, Word((0, 0, -1, 0)))

    def test_alphabet_mismatch(self):
        """Test symbols outside {-1, 0, 1}"""
        with self.assertRaises(AlphabetMismatch):
            PaperShift('1/4').is_legal(Word((2, 0)))

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(ternary_lists, st.sampled_from(KAPPAS))
    def test_scan_matches_literal_and_automaton(self, symbols, kappa):
        """Test the vectorized scan, the automaton and the literal rule agree"""
        shift = PaperShift(kappa)
        word = Word(symbols)
        expected = literal_paper_legal(tuple(symbols), Fraction(kappa))
        self.assertEqual(shift.is_legal(word), expected)
        self.assertEqual(shift.run(word) is not None, expected)

    @settings(max_examples=60, derandomize=True, deadline=None)
    @given(st.lists(st.sampled_from((-1, 0, 1)), max_size=12), st.sampled_from(KAPPAS))
    def test_scan_matches_brute_substring_oracle(self, symbols, kappa):
        """Test legality equals absence of every forbidden sub-word"""
        shift = PaperShift(kappa)
        word = Word(symbols)
        self.assertEqual(shift.is_legal(word), brute_legal(shift, word))

    def test_zero_padding_extension(self):
        """Test legal words stay legal inside 0^a w 0^b"""
        shift = PaperShift('1/2')
        for _ in range(50):
            word = LegalWordFactory(length=15, shift=shift)
            for a, b in ((0, 3), (2, 0), (5, 7)):
                self.assertTrue(shift.is_legal(Word.zeros(a) + word + Word.zeros(b)))

    def test_hereditary(self):
        """Test every sub-word of a legal word is legal"""
        shift = PaperShift('1/4')
        for _ in range(20):
            word = LegalWordFactory(length=18, shift=shift)
            for i in range(len(word)):
                for j in range(i, len(word) + 1):
                    self.assertTrue(shift.is_legal(word[i:j]))


class ContextTests(BaseTestCase):
    """Test cases for junction contexts"""

    def test_paper_contexts(self):
        """Test the tail and head that decide w 0^v u"""
        shift = PaperShift('1/4')
        word = Word((1, 0, 0, -1, -1, 0, 0, 0, 1, 1, 0))
        self.assertEqual(shift.tail_context(word), (-1, 0, 0, 0, 1, 1, 0))
        self.assertEqual(shift.head_context(word), (1,))
        self.assertEqual(shift.tail_context(Word.zeros(4)), Word.empty())
        self.assertEqual(shift.head_context(Word((0, 0, -1, -1, 0, 1))), (0, 0, -1, -1))
        self.assertEqual(shift.tail_context(Word((0, 1, 1))), (1, 1))

    def test_head_closed(self):
        """Test head contexts freeze once a nonzero run ends"""
        shift = PaperShift('1/4')
        self.assertFalse(shift.head_closed(Word((0, 1, 1))))
        self.assertTrue(shift.head_closed(Word((0, 1, 0))))

    def test_contexts_decide_junction_legality(self):
        """Test w 0^v u and tail 0^v head have the same legality"""
        for shift in (PaperShift('1/4'), PaperShift('1/1'), GapShift(2)):
            for _ in range(40):
                w = LegalWordFactory(length=10, shift=shift)
                u = LegalWordFactory(length=8, shift=shift)
                tail, head = shift.tail_context(w), shift.head_context(u)
                for v in range(0, 6):
                    self.assertEqual(
                        shift.is_legal(w + Word.zeros(v) + u),
                        shift.is_legal(tail + Word.zeros(v) + head),
                    )

    def test_junction_gap_cases(self):
        """Test the closed-form gap on runs, flanking zeros and merged runs"""
        shift = PaperShift('1/4')
        self.assertEqual(shift.junction_gap(Word((1,)), Word.constant(-1, 8)), 4)
        self.assertEqual(shift.junction_gap(Word((1, 0)), Word((0, -1))), 0)
        self.assertEqual(shift.junction_gap(Word((1, 0)), Word.constant(-1, 8)), 3)
        self.assertEqual(shift.junction_gap(Word((1,)), Word((1, 1))), 0)
        self.assertEqual(shift.junction_gap(Word.zeros(3), Word((-1,))), 0)
        self.assertIsNone(GapShift(2).junction_gap(Word((1,)), Word((1,))))

    def test_junction_gap_matches_scan(self):
        """Test the closed-form gap equals the first v passing the literal rule"""
        for kappa in KAPPAS:
            shift = PaperShift(kappa)
            for _ in range(60):
                w = LegalWordFactory(length=10, shift=shift)
                u = LegalWordFactory(length=8, shift=shift)
                for tail, head in ((w, u), (shift.tail_context(w), shift.head_context(u))):
                    expected = next(
                        v for v in range(shift.gap_bound(len(head)) + 1)
                        if literal_paper_legal((tail + Word.zeros(v) + head).symbols, Fraction(kappa))
                    )
                    self.assertEqual(shift.junction_gap(tail, head), expected, f'{tail} | {head}')

    def test_sft_contexts(self):
        """Test SFT contexts keep memory-many symbols"""
        shift = FiniteTypeShift(['pp0', 'mm'])
        self.assertEqual(shift.memory, 2)
        self.assertEqual(shift.tail_context(Word((1, 0, 1, 1))), (1, 1))
        self.assertEqual(shift.tail_context(Word((1,))), (1,))
        self.assertEqual(shift.head_context(Word((0, 1, 1, 1))), (0, 1))


class OtherVariantTests(BaseTestCase):
    """Test cases for full, SFT and S-gap shifts"""

    def test_full_shift(self):
        """Test every word of the full shift is legal"""
        shift = FullShift(4)
        self.assertEqual(shift.alphabet.symbols, (-1, 0, 1, 2))
        self.assertTrue(shift.is_legal(WordFactory(length=30, alphabet=shift.alphabet)))
        self.assertEqual(shift.gap_bound(100), 0)

    def test_sft_forbidden_words(self):
        """Test SFT legality by forbidden sub-words"""
        shift = FiniteTypeShift(['pp'])
        self.assertTrue(shift.is_legal(Word((1, 0, 1, -1, 1))))
        self.assertFalse(shift.is_legal(Word((0, 1, 1))))
        self.assertEqual(shift.run(Word((0, 1, 1))), None)
        with self.assertRaises(InvalidParameters):
            FiniteTypeShift([])

    def test_sft_single_symbol_forbidden(self):
        """Test a forbidden word of length 1"""
        shift = FiniteTypeShift(['m'])
        self.assertFalse(shift.is_legal(Word((-1,))))
        self.assertTrue(shift.is_legal(Word((0, 1))))

    def test_sgap_rules(self):
        """Test 1-blocks need at least min_run zeros between them"""
        shift = GapShift(2)
        self.assertEqual(shift.alphabet, Alphabet((0, 1)))
        self.assertTrue(shift.is_legal(Word((1, 0, 0, 1, 0, 0, 0, 1))))
        self.assertFalse(shift.is_legal(Word((1, 0, 1))))
        self.assertFalse(shift.is_legal(Word((1, 1))))
        self.assertTrue(shift.is_legal(Word((0, 1, 0))))
        with self.assertRaises(InvalidParameters):
            GapShift(0)

    @settings(max_examples=100, derandomize=True, deadline=None)
    @given(st.lists(st.sampled_from((0, 1)), max_size=30), st.integers(1, 4))
    def test_sgap_scan_matches_automaton(self, symbols, min_run):
        """Test the S-gap scan and automaton agree"""
        shift = GapShift(min_run)
        word = Word(symbols)
        self.assertEqual(shift.is_legal(word), shift.run(word) is not None)
        self.assertEqual(shift.is_legal(word), brute_legal(shift, word))


class BuildSubshiftTests(BaseTestCase):
    """Test cases for building subshifts from descriptors"""

    def test_descriptors_round_trip(self):
        """Test every variant rebuilds from its descriptor"""
        shifts = [
            PaperShift('1/4'), FullShift(3), GapShift(2),
            FiniteTypeShift(['pp', 'm0m']),
        ]
        for shift in shifts:
            self.assertEqual(build_subshift(shift.descriptor()), shift)

    def test_paper_descriptor(self):
        """Test the kappa-family descriptor carries kappa as a fraction string"""
        self.assertEqual(
            build_subshift({'type': 'paper', 'kappa': '1/4'}).descriptor(),
            {'type': 'paper', 'kappa': '1/4'},
        )

    def test_sft_integer_alphabet(self):
        """Test an SFT over Full(4) symbols"""
        shift = build_subshift({'type': 'sft', 'forbidden': ['22'], 'alphabet': 4})
        self.assertFalse(shift.is_legal(Word((2, 2))))

    def test_unknown_type(self):
        """Test unknown variants are rejected"""
        with self.assertRaises(InvalidParameters):
            build_subshift({'type': 'sofic'})
