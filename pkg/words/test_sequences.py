"""
Tests for Words app alphabets, words and codecs
"""

import numpy as np

from core.exceptions import AlphabetMismatch, InvalidParameters
from core.factories import WordFactory
from core.test_utils import BaseTestCase
from words.codec import from_compact, from_json, parse_word, to_compact, to_json
from words.sequences import Alphabet, Word


class AlphabetTests(BaseTestCase):
    """Test cases for Alphabet"""

    def test_default_alphabet_is_ternary(self):
        """Test the default alphabet is {-1, 0, 1}"""
        self.assertEqual(Alphabet().symbols, (-1, 0, 1))

    def test_full_alphabet_layout(self):
        """Test Full(k) alphabets start at -1"""
        self.assertEqual(Alphabet.full(2).symbols, (-1, 0))
        self.assertEqual(Alphabet.full(5).symbols, (-1, 0, 1, 2, 3))

    def test_alphabet_size_cap(self):
        """Test alphabets beyond 16 symbols are rejected"""
        Alphabet.full(16)
        with self.assertRaises(InvalidParameters):
            Alphabet.full(17)

    def test_codes_reject_foreign_symbols(self):
        """Test symbols outside the alphabet raise AlphabetMismatch"""
        with self.assertRaises(AlphabetMismatch):
            Alphabet((0, 1)).codes(Word((0, -1)))
        with self.assertRaises(AlphabetMismatch):
            Alphabet((0, 2)).codes(Word((1,)))

    def test_words_are_lexicographic(self):
        """Test alphabet^n listing order"""
        words = Alphabet().words(2)
        self.assertEqual(len(words), 9)
        self.assertEqual(words[0], (-1, -1))
        self.assertEqual(words[1], (-1, 0))
        self.assertEqual(words[-1], (1, 1))
        self.assertEqual(Alphabet().words(0), [Word.empty()])

    def test_encode_windows(self):
        """Test base-q window indices agree with the listing order"""
        alphabet = Alphabet()
        word = Word((1, 0, -1))
        codes = alphabet.codes(word)
        index = alphabet.encode(codes, 2)
        listing = alphabet.words(2)
        self.assertEqual(listing[index[0]], (1, 0))
        self.assertEqual(listing[index[1]], (0, -1))


class WordTests(BaseTestCase):
    """Test cases for Word"""

    def test_word_is_read_only(self):
        """Test the backing array cannot be written"""
        word = Word((1, 0, 1))
        with self.assertRaises(ValueError):
            word.array[0] = 0

    def test_length_and_slicing(self):
        """Test length, indexing and slices"""
        word = Word((1, 0, -1, -1))
        self.assertEqual(len(word), 4)
        self.assertEqual(word.length, 4)
        self.assertEqual(word[2], -1)
        self.assertEqual(word[1:3], (0, -1))
        self.assertIsInstance(word[1:3], Word)

    def test_concatenation_and_repetition(self):
        """Test + and * build the expected words"""
        word = Word((1,)) + Word.zeros(2) + Word.constant(-1, 2)
        self.assertEqual(word, (1, 0, 0, -1, -1))
        self.assertEqual(Word((1, 0)) * 3, (1, 0, 1, 0, 1, 0))
        self.assertEqual(Word.concat([]), Word.empty())

    def test_equality_and_hash(self):
        """Test equal words hash equally"""
        first = Word((1, 0, -1))
        second = Word(np.array([1, 0, -1]))
        self.assertEqual(first, second)
        self.assertEqual(len({first, second}), 1)

    def test_is_zero(self):
        """Test the all-zero check"""
        self.assertTrue(Word.zeros(5).is_zero())
        self.assertTrue(Word.empty().is_zero())
        self.assertFalse(Word((0, 1)).is_zero())

    def test_negative_repetition_rejected(self):
        """Test negative repetition counts"""
        with self.assertRaises(InvalidParameters):
            Word((1,)) * -1


class CodecTests(BaseTestCase):
    """Test cases for word serialization"""

    def test_compact_format(self):
        """Test compact strings use m, 0 and p"""
        word = Word((-1, 0, 1))
        self.assertEqual(to_compact(word), 'm0p')
        self.assertEqual(from_compact('m0p'), word)
        self.assertEqual(from_compact('m01'), word)
        self.assertEqual(repr(word), "Word('m0p')")

    def test_compact_large_symbols(self):
        """Test digits and letters for larger full-shift symbols"""
        word = Word((2, 9, 10, 14))
        self.assertEqual(to_compact(word), '29ae')
        self.assertEqual(from_compact('29ae'), word)

    def test_unknown_compact_symbol(self):
        """Test unknown characters are rejected"""
        with self.assertRaises(InvalidParameters):
            from_compact('p0x')

    def test_json_format(self):
        """Test JSON integer arrays"""
        word = WordFactory(length=20)
        self.assertEqual(from_json(to_json(word)), word)
        with self.assertRaises(InvalidParameters):
            from_json('{"a": 1}')

    def test_parse_word_accepts_all_forms(self):
        """Test parse_word dispatch"""
        word = Word((1, 1, 0))
        self.assertIs(parse_word(word), word)
        self.assertEqual(parse_word('pp0'), word)
        self.assertEqual(parse_word('[1, 1, 0]'), word)
        self.assertEqual(parse_word([1, 1, 0]), word)
