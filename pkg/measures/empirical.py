"""
Empirical measures of orbit segments as cylinder-frequency tables.

The frequency of a length-d word is the number of the first ``n`` windows
that read it, divided by ``n``. Counts are stored as integers per depth so
that frequencies are available both as floats and as exact fractions.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from django.conf import settings

from core.exceptions import InsufficientDepth, InvalidParameters, WindowOverrun
from words.codec import parse_word, to_compact
from words.sequences import Alphabet, Word

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EmpiricalMeasure:
    alphabet: Alphabet
    depth: int
    sample_count: int
    counts: tuple
    periodic: bool = False

    def _index(self, word):
        codes = self.alphabet.codes(word)
        return int(self.alphabet.encode(codes, len(word))[0])

    def count(self, word):
        word = parse_word(word)
        if not 1 <= len(word) <= self.depth:
            raise InsufficientDepth(
                'cylinder is longer than the measure depth', length=len(word), depth=self.depth
            )
        return int(self.counts[len(word) - 1][self._index(word)])

    def freq(self, word):
        """Exact frequency of the cylinder [word]"""
        return Fraction(self.count(word), self.sample_count)

    def frequencies(self, d):
        """Float frequencies of all length-d words in alphabet order"""
        if not 1 <= d <= self.depth:
            raise InsufficientDepth('depth out of range', d=d, depth=self.depth)
        return self.counts[d - 1] / self.sample_count

    @cached_property
    def max_marginal_defect(self):
        """max |freq(w) - sum_a freq(wa)| over words shorter than the depth"""
        defect = 0.0
        q = self.alphabet.size
        for d in range(1, self.depth):
            children = self.counts[d].reshape(-1, q).sum(axis=1)
            defect = max(defect, float(np.abs(self.counts[d - 1] - children).max()) / self.sample_count)
        return defect

    def to_dict(self):
        entries = []
        for d in range(1, self.depth + 1):
            for word, count in zip(self.alphabet.words(d), self.counts[d - 1]):
                if count:
                    fraction = Fraction(int(count), self.sample_count)
                    entries.append({'word': to_compact(word), 'freq': str(fraction)})
        return {
            'alphabet': self.alphabet.descriptor(),
            'depth': self.depth,
            'sample_count': self.sample_count,
            'periodic': self.periodic,
            'entries': entries,
        }


def _tally(alphabet, word, n, depth):
    codes = alphabet.codes(word[:n + depth - 1])
    counts = []
    for d in range(1, depth + 1):
        index = alphabet.encode(codes[:n + d - 1], d)
        counts.append(np.bincount(index, minlength=alphabet.size ** d).astype(np.int64))
    return tuple(counts)


def _check_depth(depth, alphabet):
    if depth < 1:
        raise InvalidParameters('depth must be positive', depth=depth)
    if alphabet.size ** depth > 1 << 22:
        raise InvalidParameters('depth too large for this alphabet', depth=depth)


def empirical_measure(word, n, depth=None, alphabet=None):
    """(1/n) sum of point masses along the first n shifts of ``word``"""
    alphabet = alphabet or Alphabet()
    depth = depth or settings.ERGOLAB['MEASURE_DEPTH']
    _check_depth(depth, alphabet)
    if n < 1:
        raise InvalidParameters('n must be at least 1', n=n)
    if n + depth - 1 > len(word):
        raise WindowOverrun(
            'measure windows run past the end of the word',
            needed=n + depth - 1, length=len(word),
        )
    return EmpiricalMeasure(alphabet, depth, n, _tally(alphabet, word, n, depth))


def periodic_measure(block, depth=None, alphabet=None):
    """Invariant measure carried by the periodic point block^∞"""
    alphabet = alphabet or Alphabet()
    depth = depth or settings.ERGOLAB['MEASURE_DEPTH']
    _check_depth(depth, alphabet)
    if len(block) == 0:
        raise InvalidParameters('periodic block must be nonempty')
    period = len(block)
    reps = 1 + math.ceil((depth - 1) / period)
    word = Word(block) * reps
    return EmpiricalMeasure(alphabet, depth, period, _tally(alphabet, word, period, depth), periodic=True)


def integrate(f, mu, exact=False):
    """∫ f dmu from the depth-L frequencies (L = window of f)"""
    if f.window > mu.depth:
        raise InsufficientDepth(
            'observable window exceeds the measure depth', window=f.window, depth=mu.depth
        )
    if f.alphabet != mu.alphabet:
        raise InvalidParameters('observable and measure use different alphabets')
    counts = mu.counts[f.window - 1]
    if exact:
        if f.exact is None:
            raise InvalidParameters('observable table is not rational')
        total = sum((int(c) * f.exact[i] for i, c in enumerate(counts) if c), Fraction(0))
        return total / mu.sample_count
    return math.fsum(counts[counts > 0] * f.table[counts > 0]) / mu.sample_count
