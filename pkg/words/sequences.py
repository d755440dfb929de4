"""
Alphabets and finite words.

A ``Word`` is an immutable wrapper around a read-only ``int8`` numpy array so
that long orbit segments (millions of symbols) stay cheap to store, slice and
scan. Indexing is left to right; the shift moves the window right by one.
"""

import numpy as np

from core.exceptions import AlphabetMismatch, InvalidParameters

MAX_ALPHABET_SIZE = 16
TERNARY = (-1, 0, 1)


class Alphabet:
    """A small ordered set of integer symbols"""

    __slots__ = ('symbols', '_lookup', '_offset')

    def __init__(self, symbols=TERNARY):
        symbols = tuple(sorted({int(s) for s in symbols}))
        if not symbols:
            raise InvalidParameters('alphabet must not be empty')
        if len(symbols) > MAX_ALPHABET_SIZE:
            raise InvalidParameters(
                f'alphabet has {len(symbols)} symbols, cap is {MAX_ALPHABET_SIZE}',
                size=len(symbols),
            )
        self.symbols = symbols
        self._offset = symbols[0]
        lookup = np.full(symbols[-1] - symbols[0] + 1, -1, dtype=np.int64)
        for index, symbol in enumerate(symbols):
            lookup[symbol - self._offset] = index
        self._lookup = lookup

    @classmethod
    def full(cls, size):
        """Full-shift alphabet {-1, 0, 1, ..., size-2}"""
        if size < 1:
            raise InvalidParameters('alphabet size must be positive', size=size)
        return cls(range(-1, size - 1))

    @property
    def size(self):
        return len(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self.symbols

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f'Alphabet({list(self.symbols)})'

    def codes(self, word):
        """Map every symbol of ``word`` to its index in the alphabet"""
        array = word.array if isinstance(word, Word) else np.asarray(word, dtype=np.int64)
        if array.size == 0:
            return np.zeros(0, dtype=np.int64)
        shifted = array.astype(np.int64) - self._offset
        inside = (shifted >= 0) & (shifted < self._lookup.size)
        if not inside.all():
            raise AlphabetMismatch(
                'word contains symbols outside the alphabet',
                alphabet=list(self.symbols),
            )
        codes = self._lookup[shifted]
        if (codes < 0).any():
            raise AlphabetMismatch(
                'word contains symbols outside the alphabet',
                alphabet=list(self.symbols),
            )
        return codes

    def check(self, word):
        self.codes(word)
        return word

    def words(self, length):
        """All words of ``length`` in lexicographic order of symbol index"""
        if length == 0:
            return [Word.empty()]
        grids = np.indices((self.size,) * length).reshape(length, -1).T
        table = np.asarray(self.symbols, dtype=np.int8)
        return [Word(table[row]) for row in grids]

    def encode(self, codes, length):
        """Integer index of each length-``length`` window of a code array"""
        count = codes.size - length + 1
        if count <= 0:
            return np.zeros(0, dtype=np.int64)
        index = np.zeros(count, dtype=np.int64)
        for offset in range(length):
            index = index * self.size + codes[offset:offset + count]
        return index

    def descriptor(self):
        return list(self.symbols)


class Word:
    """Immutable finite symbol sequence"""

    __slots__ = ('_array',)

    def __init__(self, symbols=()):
        if isinstance(symbols, Word):
            array = symbols._array
        else:
            array = np.array(symbols, dtype=np.int8).reshape(-1)
            array.setflags(write=False)
        self._array = array

    @classmethod
    def empty(cls):
        return cls(())

    @classmethod
    def constant(cls, symbol, length):
        if length < 0:
            raise InvalidParameters('length must be non-negative', length=length)
        return cls(np.full(length, symbol, dtype=np.int8))

    @classmethod
    def zeros(cls, length):
        return cls.constant(0, length)

    @classmethod
    def concat(cls, parts):
        arrays = [part.array for part in parts if len(part)]
        if not arrays:
            return cls.empty()
        return cls(np.concatenate(arrays))

    @property
    def array(self):
        return self._array

    @property
    def length(self):
        return int(self._array.size)

    @property
    def symbols(self):
        return tuple(int(s) for s in self._array)

    def __len__(self):
        return int(self._array.size)

    def __iter__(self):
        return (int(s) for s in self._array)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return Word(self._array[key])
        return int(self._array[key])

    def __add__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return Word.concat((self, other))

    def __mul__(self, reps):
        if not isinstance(reps, int):
            return NotImplemented
        if reps < 0:
            raise InvalidParameters('repetition count must be non-negative', reps=reps)
        return Word(np.tile(self._array, reps))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Word):
            return np.array_equal(self._array, other._array)
        if isinstance(other, tuple):
            return self.symbols == other
        return NotImplemented

    def __lt__(self, other):
        return self.symbols < other.symbols

    def __hash__(self):
        return hash((self._array.size, self._array.tobytes()))

    def __repr__(self):
        from .codec import to_compact
        return f"Word('{to_compact(self)}')"

    def is_zero(self):
        return not self._array.any()
