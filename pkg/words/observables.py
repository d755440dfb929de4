"""
Locally constant observables and Birkhoff averages along finite orbit segments.

A ``CylinderFunction`` with window ``L`` assigns a value to every length-L word
over its alphabet; ``f(T^i w)`` is the table value of ``w[i:i+L]``. Tables are
kept as float64 arrays for vectorized evaluation and, when every entry is
rational, as exact ``Fraction`` tuples as well.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from core.exceptions import InvalidParameters, WindowOverrun

from .codec import parse_word, to_compact
from .sequences import Alphabet, Word

logger = logging.getLogger(__name__)

MAX_TABLE_SIZE = 1 << 20


def _exact(value):
    if isinstance(value, bool):
        raise InvalidParameters('observable values must be numbers')
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            raise InvalidParameters(f'cannot read {value!r} as a number') from None
    return None


@dataclass(frozen=True, eq=False)
class CylinderFunction:
    """Observable depending on the first ``window`` symbols of a point"""
    alphabet: Alphabet
    window: int
    table: np.ndarray
    exact: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.window < 1:
            raise InvalidParameters('window must be a positive integer', window=self.window)
        size = self.alphabet.size ** self.window
        if size > MAX_TABLE_SIZE:
            raise InvalidParameters('observable table too large', entries=size)
        table = np.asarray(self.table, dtype=np.float64).reshape(-1)
        if table.size != size:
            raise InvalidParameters(
                'table must be total on alphabet^window',
                expected=size, received=int(table.size),
            )
        if not np.isfinite(table).all():
            raise InvalidParameters('table values must be finite')
        table = table.copy()
        table.setflags(write=False)
        object.__setattr__(self, 'table', table)
        if self.exact is not None and len(self.exact) != size:
            raise InvalidParameters('exact table does not match the float table')

    @classmethod
    def from_values(cls, alphabet, window, values):
        """Build from a sequence of numbers indexed like ``alphabet.words(window)``"""
        values = list(values)
        exact = [_exact(v) for v in values]
        exact = tuple(exact) if all(v is not None for v in exact) else None
        floats = [float(v) if not isinstance(v, str) else float(Fraction(v)) for v in values]
        return cls(alphabet=alphabet, window=window, table=np.array(floats), exact=exact)

    @classmethod
    def from_mapping(cls, alphabet, window, mapping, default=None):
        """Build from ``{word: value}``; missing words take ``default`` if given"""
        keyed = {parse_word(k).symbols: v for k, v in mapping.items()}
        values = []
        for word in alphabet.words(window):
            if word.symbols in keyed:
                values.append(keyed[word.symbols])
            elif default is not None:
                values.append(default)
            else:
                raise InvalidParameters(
                    'table is not total on alphabet^window', missing=to_compact(word)
                )
        return cls.from_values(alphabet, window, values)

    @classmethod
    def constant(cls, alphabet, value, window=1):
        return cls.from_values(alphabet, window, [value] * alphabet.size ** window)

    @classmethod
    def coordinate(cls, alphabet):
        """f(x) = x_0"""
        return cls.from_values(alphabet, 1, list(alphabet.symbols))

    @classmethod
    def indicator(cls, alphabet, word):
        """Indicator of the cylinder set [word]"""
        word = parse_word(word)
        alphabet.check(word)
        if len(word) == 0:
            raise InvalidParameters('cylinder word must be nonempty')
        return cls.from_values(
            alphabet, len(word), [1 if w == word else 0 for w in alphabet.words(len(word))]
        )

    @classmethod
    def from_json(cls, payload, alphabet=None):
        """Load ``{window, entries: [{word, value}], alphabet?, default?}``"""
        data = json.loads(payload) if isinstance(payload, str) else payload
        try:
            window = int(data['window'])
            entries = data['entries']
        except (KeyError, TypeError, ValueError):
            raise InvalidParameters('observable JSON needs window and entries') from None
        if alphabet is None:
            alphabet = Alphabet(data.get('alphabet', (-1, 0, 1)))
        mapping = {}
        for entry in entries:
            mapping[to_compact(parse_word(entry['word']))] = entry['value']
        return cls.from_mapping(alphabet, window, mapping, default=data.get('default'))

    def to_dict(self):
        words = self.alphabet.words(self.window)
        values = self.exact if self.exact is not None else self.table
        return {
            'alphabet': self.alphabet.descriptor(),
            'window': self.window,
            'entries': [
                {'word': to_compact(w), 'value': _json_number(v)}
                for w, v in zip(words, values)
            ],
        }

    @cached_property
    def sup(self):
        return float(self.table.max())

    @cached_property
    def inf(self):
        return float(self.table.min())

    @cached_property
    def norm(self):
        """Sup-norm of the table"""
        return float(np.abs(self.table).max())

    @property
    def oscillation(self):
        return self.sup - self.inf

    def combine(self, a, other, b=1.0):
        """Affine combination ``a*self + b*other`` on the common window"""
        if other.alphabet != self.alphabet:
            raise InvalidParameters('observables live on different alphabets')
        window = max(self.window, other.window)
        left, right = self.widen(window), other.widen(window)
        if left.exact is not None and right.exact is not None and _is_rational(a) and _is_rational(b):
            a, b = Fraction(a), Fraction(b)
            return CylinderFunction.from_values(
                self.alphabet, window, [a * x + b * y for x, y in zip(left.exact, right.exact)]
            )
        return CylinderFunction(
            alphabet=self.alphabet, window=window,
            table=float(a) * left.table + float(b) * right.table,
        )

    def widen(self, window):
        """Same function read through a longer window"""
        if window == self.window:
            return self
        if window < self.window:
            raise InvalidParameters('cannot shrink an observable window')
        spread = self.alphabet.size ** (window - self.window)
        index = np.arange(self.alphabet.size ** window) // spread
        exact = tuple(self.exact[i] for i in index) if self.exact is not None else None
        return CylinderFunction(
            alphabet=self.alphabet, window=window, table=self.table[index], exact=exact
        )

    def indices(self, word, n):
        """Table index of the windows starting at 0..n-1"""
        _check_span(word, n, self.window)
        codes = self.alphabet.codes(word[:n + self.window - 1])
        return self.alphabet.encode(codes, self.window)

    def values(self, word, n):
        """Array of f(T^i w) for i in [0, n)"""
        return self.table[self.indices(word, n)]


def _is_rational(value):
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def _json_number(value):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    return float(value)


def _check_span(word, n, window):
    if n < 0:
        raise InvalidParameters('sample count must be non-negative', n=n)
    if n + window - 1 > len(word):
        raise WindowOverrun(
            'window runs past the end of the word',
            needed=n + window - 1, length=len(word),
        )


def evaluate(f, word, i):
    """f(T^i w) = table[w[i:i+L]]"""
    if i < 0:
        raise InvalidParameters('index must be non-negative', index=i)
    if i + f.window > len(word):
        raise WindowOverrun(
            'window runs past the end of the word', index=i, window=f.window, length=len(word)
        )
    codes = f.alphabet.codes(word[i:i + f.window])
    return float(f.table[f.alphabet.encode(codes, f.window)[0]])


def birkhoff_sums(f, word, n):
    """Cumulative sums S_k = sum_{i<k} f(T^i w) for k = 1..n"""
    return np.cumsum(f.values(word, n))


def birkhoff_average(f, word, n):
    """S_n / n from the same prefix sums as birkhoff_averages"""
    if n < 1:
        raise InvalidParameters('n must be at least 1', n=n)
    return float(birkhoff_sums(f, word, n)[n - 1] / n)


def exact_birkhoff_average(f, word, n):
    """Rational Birkhoff average; requires a rational table"""
    if f.exact is None:
        raise InvalidParameters('observable table is not rational')
    if n < 1:
        raise InvalidParameters('n must be at least 1', n=n)
    counts = np.bincount(f.indices(word, n), minlength=f.table.size)
    total = sum((int(c) * f.exact[i] for i, c in enumerate(counts) if c), Fraction(0))
    return total / n


def birkhoff_averages(f, word, n_lo, n_hi):
    """Averages for every n in [n_lo, n_hi], as a float array"""
    if n_lo < 1 or n_hi < n_lo:
        raise InvalidParameters('need 1 <= N0 <= N1', N0=n_lo, N1=n_hi)
    sums = birkhoff_sums(f, word, n_hi)
    ns = np.arange(n_lo, n_hi + 1)
    return sums[n_lo - 1:] / ns


def irregularity_gap(f, word, n_lo, n_hi):
    """(min, max) of the Birkhoff averages over n in [N0, N1]"""
    averages = birkhoff_averages(f, word, n_lo, n_hi)
    lo, hi = float(averages.min()), float(averages.max())
    logger.debug('irregularity gap over [%d, %d]: %.6f .. %.6f', n_lo, n_hi, lo, hi)
    return lo, hi
