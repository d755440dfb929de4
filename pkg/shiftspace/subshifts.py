"""
Subshift definitions.

Every variant offers three views of its language:

* ``is_legal`` - a vectorized numpy scan of a whole word;
* ``initial_state`` / ``step`` - an incremental automaton that accepts a
  symbol or rejects it (returns ``None``), used for enumeration and searches;
* ``tail_context`` / ``head_context`` - the shortest suffix of ``w`` and
  prefix of ``u`` deciding whether ``w 0^v u`` is legal, given that ``w``
  and ``u`` are.

The kappa family forbids (R1) adjacent symbols of opposite sign and (R2) any
``a 0^k b_j ... b_1`` with nonzero ``a, b_i`` and ``1 <= k <= m(j)``. Since
``m`` is nondecreasing, R2 reduces to: a flanked zero-run of length ``k``
followed by a maximal nonzero run of length ``r`` needs ``k >= m(r) + 1``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from core.exceptions import InvalidParameters
from words.codec import parse_word, to_compact
from words.sequences import Alphabet, Word

BINARY = (0, 1)


def parse_fraction(value):
    """Read a positive rational such as ``"1/4"``, ``"1/1"`` or ``Fraction(1, 4)``"""
    try:
        kappa = Fraction(value) if not isinstance(value, float) else Fraction(str(value))
    except (TypeError, ValueError, ZeroDivisionError):
        raise InvalidParameters(f'cannot read {value!r} as a fraction') from None
    if kappa <= 0:
        raise InvalidParameters('kappa must be positive', kappa=str(kappa))
    return kappa


@dataclass(frozen=True)
class GapBudget:
    """m(n) = floor(kappa * n) + 1, computed exactly"""
    kappa: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'kappa', parse_fraction(self.kappa))

    def m(self, n):
        return math.floor(self.kappa * n) + 1

    def m_array(self, runs):
        runs = np.asarray(runs, dtype=np.int64)
        return (runs * self.kappa.numerator) // self.kappa.denominator + 1

    def merged_gap_holds(self, gaps, runs):
        """Check sum(k_i) >= m(sum(j_i)) + t for a block chain 1 0^k1 1^j1 ... 0^kt 1^jt"""
        if len(gaps) != len(runs) or not gaps:
            raise InvalidParameters('need matching, nonempty gap and run lists')
        return sum(gaps) >= self.m(sum(runs)) + len(gaps)


def _first(mask):
    """Index of the first True entry, or the mask size when there is none"""
    if mask.size == 0:
        return 0
    index = int(np.argmax(mask))
    return index if mask[index] else int(mask.size)


def _runs(array):
    """Run-length encoding of the nonzero mask: (starts, lengths, nonzero flags)"""
    mask = array != 0
    boundaries = np.flatnonzero(mask[1:] != mask[:-1]) + 1
    starts = np.concatenate(([0], boundaries))
    lengths = np.diff(np.concatenate((starts, [array.size])))
    return starts, lengths, mask[starts]


class Subshift:
    """Base class for subshift variants"""
    kind = None
    alphabet = Alphabet()
    gap_monotone = True

    def descriptor(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(repr(sorted(self.descriptor().items())))

    def __repr__(self):
        return f'{type(self).__name__}({self.descriptor()})'

    def is_legal(self, word):
        self.alphabet.check(word)
        if len(word) < 2:
            return True
        return self._scan(word.array)

    def _scan(self, array):
        raise NotImplementedError

    def initial_state(self):
        raise NotImplementedError

    def step(self, state, symbol):
        raise NotImplementedError

    def run(self, word, state=None):
        """Feed ``word`` through the automaton; ``None`` once rejected"""
        state = self.initial_state() if state is None else state
        for symbol in word:
            state = self.step(state, symbol)
            if state is None:
                return None
        return state

    def tail_context(self, word):
        return word

    def head_context(self, word):
        return word

    def head_closed(self, prefix):
        """True when no extension of ``prefix`` can change its head context"""
        return False

    def gap_bound(self, n):
        """Sufficient connecting gap in front of a word of length n, if known"""
        return None

    def junction_gap(self, tail, head):
        """Minimal v with tail 0^v head legal, for legal contexts, when known in closed form"""
        return None


class FullShift(Subshift):
    kind = 'full'

    def __init__(self, size=3):
        self.alphabet = Alphabet.full(size)
        self.size = size

    def descriptor(self):
        return {'type': self.kind, 'alphabet': self.size}

    def _scan(self, array):
        return True

    def initial_state(self):
        return ()

    def step(self, state, symbol):
        return state

    def tail_context(self, word):
        return Word.empty()

    def head_context(self, word):
        return Word.empty()

    def head_closed(self, prefix):
        return True

    def gap_bound(self, n):
        return 0


class FiniteTypeShift(Subshift):
    """Shift of finite type given by a finite list of forbidden words"""
    kind = 'sft'
    gap_monotone = False

    def __init__(self, forbidden, alphabet=None):
        self.alphabet = alphabet or Alphabet()
        words = sorted({parse_word(w) for w in forbidden})
        if not words:
            raise InvalidParameters('an SFT needs at least one forbidden word')
        for word in words:
            if len(word) < 1:
                raise InvalidParameters('forbidden words must be nonempty')
            self.alphabet.check(word)
        self.forbidden = tuple(words)
        self._patterns = tuple(w.symbols for w in words)
        self.memory = max(len(w) for w in words) - 1

    def descriptor(self):
        return {
            'type': self.kind,
            'forbidden': [to_compact(w) for w in self.forbidden],
            'alphabet': self.alphabet.descriptor(),
        }

    def is_legal(self, word):
        self.alphabet.check(word)
        return self._scan(word.array)

    def _scan(self, array):
        for pattern in self.forbidden:
            size = len(pattern)
            if size > array.size:
                continue
            windows = np.lib.stride_tricks.sliding_window_view(array, size)
            if (windows == pattern.array).all(axis=1).any():
                return False
        return True

    def initial_state(self):
        return ()

    def step(self, state, symbol):
        extended = state + (symbol,)
        for pattern in self._patterns:
            if extended[-len(pattern):] == pattern and len(extended) >= len(pattern):
                return None
        return extended[len(extended) - self.memory:] if self.memory else ()

    def tail_context(self, word):
        return word[max(0, len(word) - self.memory):] if self.memory else Word.empty()

    def head_context(self, word):
        return word[:self.memory]

    def head_closed(self, prefix):
        return len(prefix) >= self.memory


class GapShift(Subshift):
    """S-gap shift on {0, 1} with S = {s >= min_run}"""
    kind = 'sgap'
    alphabet = Alphabet(BINARY)

    def __init__(self, min_run):
        if int(min_run) < 1:
            raise InvalidParameters('min_run must be a positive integer', min_run=min_run)
        self.min_run = int(min_run)

    def descriptor(self):
        return {'type': self.kind, 'min_run': self.min_run}

    def _scan(self, array):
        ones = np.flatnonzero(array == 1)
        if ones.size < 2:
            return True
        return bool((np.diff(ones) - 1 >= self.min_run).all())

    def initial_state(self):
        return (False, 0)

    def step(self, state, symbol):
        seen, zeros = state
        if symbol == 0:
            return (seen, min(zeros + 1, self.min_run))
        if seen and zeros < self.min_run:
            return None
        return (True, 0)

    def tail_context(self, word):
        ones = np.flatnonzero(word.array == 1)
        return word[int(ones[-1]):] if ones.size else Word.empty()

    def head_context(self, word):
        ones = np.flatnonzero(word.array == 1)
        return word[:int(ones[0]) + 1] if ones.size else Word.empty()

    def head_closed(self, prefix):
        return 1 in prefix

    def gap_bound(self, n):
        return self.min_run


class PaperShift(Subshift):
    """Subshift of {-1, 0, 1}^Z forbidding R1 and R2 for the budget m(n)"""
    kind = 'paper'

    def __init__(self, kappa):
        self.budget = kappa if isinstance(kappa, GapBudget) else GapBudget(kappa)

    @property
    def kappa(self):
        return self.budget.kappa

    def m(self, n):
        return self.budget.m(n)

    def descriptor(self):
        return {'type': self.kind, 'kappa': str(self.kappa)}

    def _scan(self, array):
        if (array[:-1].astype(np.int16) * array[1:] < 0).any():
            return False
        _, lengths, nonzero = _runs(array)
        # interior zero-runs: a nonzero run on both sides
        interior = np.flatnonzero(~nonzero[1:-1]) + 1
        if interior.size == 0:
            return True
        gaps = lengths[interior]
        right = lengths[interior + 1]
        return bool((gaps >= self.budget.m_array(right) + 1).all())

    # Automaton states:
    #   ('z', k, flanked)   inside a zero-run of length k
    #   ('r', sign, r, k)   inside a nonzero run of length r; k is the flanked
    #                       zero-run before it, or None
    def initial_state(self):
        return ('z', 0, False)

    def step(self, state, symbol):
        if state[0] == 'z':
            _, k, flanked = state
            if symbol == 0:
                return ('z', k + 1, flanked)
            if flanked:
                if k < self.m(1) + 1:
                    return None
                return ('r', symbol, 1, k)
            return ('r', symbol, 1, None)
        _, sign, r, k = state
        if symbol == 0:
            return ('z', 1, True)
        if symbol * sign < 0:
            return None
        if k is not None and k < self.m(r + 1) + 1:
            return None
        return ('r', sign, r + 1, k)

    def tail_context(self, word):
        if len(word) == 0:
            return word
        starts, lengths, nonzero = _runs(word.array)
        runs = np.flatnonzero(nonzero)
        if runs.size == 0:
            return Word.empty()
        last = int(runs[-1])
        # keep the flank of the zero-run in front of the last nonzero run
        if last >= 2:
            return word[int(starts[last - 1]) - 1:]
        return word[int(starts[last]):]

    def head_context(self, word):
        if len(word) == 0:
            return word
        starts, lengths, nonzero = _runs(word.array)
        runs = np.flatnonzero(nonzero)
        if runs.size == 0:
            return Word.empty()
        first = int(runs[0])
        return word[:int(starts[first] + lengths[first])]

    def head_closed(self, prefix):
        seen = False
        for symbol in prefix:
            if symbol:
                seen = True
            elif seen:
                return True
        return False

    def gap_bound(self, n):
        return 1 + self.m(n)

    def junction_gap(self, tail, head):
        if not (tail.array != 0).any() or not (head.array != 0).any():
            return 0
        trailing = _first(tail.array[::-1] != 0)
        leading = _first(head.array != 0)
        run = _first(head.array[leading:] == 0)
        need = self.m(run) + 1 - trailing - leading
        if need <= 0:
            return 0
        if trailing + leading == 0:
            # v = 0 merges the two nonzero runs
            if int(tail.array[-1]) * int(head.array[0]) > 0 and self.is_legal(tail + head):
                return 0
        return need


def build_subshift(descriptor):
    """Instantiate a subshift from ``{type: ..., ...}``"""
    if isinstance(descriptor, Subshift):
        return descriptor
    data = dict(descriptor)
    kind = data.get('type')
    if kind == 'paper':
        return PaperShift(data.get('kappa', '1/1'))
    if kind == 'full':
        return FullShift(int(data.get('alphabet', 3)))
    if kind == 'sgap':
        return GapShift(int(data.get('min_run', 2)))
    if kind == 'sft':
        alphabet = data.get('alphabet')
        if isinstance(alphabet, int):
            alphabet = Alphabet.full(alphabet)
        elif alphabet is not None:
            alphabet = Alphabet(alphabet)
        return FiniteTypeShift(data.get('forbidden', ()), alphabet=alphabet)
    raise InvalidParameters(f'unknown subshift type {kind!r}')
