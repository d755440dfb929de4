"""
Language enumeration, counting and entropy estimates.

Listing walks the legality automaton depth-first and prunes a prefix as soon
as it is rejected. Counting walks the same tree but memoizes on
``(automaton state, remaining length)``, which keeps it polynomial for the
built-in variants. Both split the work over first symbols and merge the
partial results in alphabet order, so the outcome never depends on the
number of threads.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from django.conf import settings

from core.exceptions import CapExceeded, InvalidParameters
from words.codec import to_compact
from words.sequences import Word

from .subshifts import build_subshift

logger = logging.getLogger(__name__)


def _threads(threads):
    return max(1, int(threads or settings.ERGOLAB['THREADS']))


def _map_first_symbols(shift, task, threads):
    """Run ``task(symbol, state)`` for every accepted first symbol, in order"""
    start = shift.initial_state()
    firsts = []
    for symbol in shift.alphabet:
        state = shift.step(start, symbol)
        if state is not None:
            firsts.append((symbol, state))
    threads = _threads(threads)
    if threads == 1 or len(firsts) < 2:
        return [task(symbol, state) for symbol, state in firsts]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda item: task(*item), firsts))


def iter_language(shift, n):
    """Yield every legal word of length n in lexicographic order"""
    shift = build_subshift(shift)
    if n == 0:
        yield Word.empty()
        return
    symbols = shift.alphabet.symbols
    prefix = []
    stack = [iter(symbols)]
    states = [shift.initial_state()]
    while stack:
        for symbol in stack[-1]:
            state = shift.step(states[-1], symbol)
            if state is None:
                continue
            prefix.append(symbol)
            if len(prefix) == n:
                yield Word(prefix)
                prefix.pop()
                continue
            states.append(state)
            stack.append(iter(symbols))
            break
        else:
            stack.pop()
            states.pop()
            if prefix:
                prefix.pop()


def _list_from(shift, n, symbol, state):
    words = []
    if n == 1:
        return [Word((symbol,))]
    symbols = shift.alphabet.symbols

    def extend(prefix, state):
        for nxt in symbols:
            following = shift.step(state, nxt)
            if following is None:
                continue
            prefix.append(nxt)
            if len(prefix) == n:
                words.append(Word(prefix))
            else:
                extend(prefix, following)
            prefix.pop()

    extend([symbol], state)
    return words


class LanguageCounter:
    """Memoized count of legal continuations from an automaton state"""

    def __init__(self, shift):
        self.shift = shift
        self.symbols = shift.alphabet.symbols
        self.completions = lru_cache(maxsize=None)(self._completions)

    def _completions(self, state, remaining):
        if remaining == 0:
            return 1
        total = 0
        for symbol in self.symbols:
            following = self.shift.step(state, symbol)
            if following is not None:
                total += self.completions(following, remaining - 1)
        return total

    def count(self, n):
        return self.completions(self.shift.initial_state(), n)


@dataclass
class LanguageCount:
    n: int
    count: int
    words: list = field(default=None, repr=False)

    def to_dict(self):
        data = {'n': self.n, 'count': self.count}
        if self.words is not None:
            data['words'] = [to_compact(word) for word in self.words]
        return data


def count_language(shift, n, listing=False, threads=None):
    """|L_n| of the subshift, optionally with the sorted word list"""
    shift = build_subshift(shift)
    if n < 0:
        raise InvalidParameters('n must be non-negative', n=n)
    cap = settings.ERGOLAB['ENUM_CAP'] if listing else settings.ERGOLAB['COUNT_CAP']
    if n > cap:
        raise CapExceeded(
            f'n = {n} is beyond the {"listing" if listing else "counting"} cap',
            n=n, cap=cap,
        )
    if n == 0:
        return LanguageCount(0, 1, [Word.empty()] if listing else None)
    if listing:
        parts = _map_first_symbols(
            shift, lambda symbol, state: _list_from(shift, n, symbol, state), threads
        )
        words = [word for part in parts for word in part]
        result = LanguageCount(n, len(words), words)
    else:
        parts = _map_first_symbols(
            shift,
            lambda symbol, state: LanguageCounter(shift).completions(state, n - 1),
            threads,
        )
        result = LanguageCount(n, sum(parts))
    logger.debug('%r: |L_%d| = %d', shift, n, result.count)
    return result


def growth_table(shift, n_max):
    """Rows (n, count, ratio, log_growth) for n = 1..n_max"""
    shift = build_subshift(shift)
    cap = settings.ERGOLAB['COUNT_CAP']
    if n_max > cap:
        raise CapExceeded(f'n = {n_max} is beyond the counting cap', n=n_max, cap=cap)
    counter = LanguageCounter(shift)
    rows = []
    previous = 1
    for n in range(1, n_max + 1):
        count = counter.count(n)
        ratio = count / previous if previous else 0.0
        log_growth = math.log(count) / n if count else float('-inf')
        rows.append((n, count, ratio, log_growth))
        previous = count
    return rows


@dataclass
class EntropyEstimate:
    n: int
    count: int
    log_growth: float
    ratio: float
    certified: bool
    delta: float
    window: int
    rows: list = field(repr=False, default_factory=list)

    def to_dict(self):
        return {
            'n': self.n,
            'count': self.count,
            'log_growth': self.log_growth,
            'ratio': self.ratio,
            'certified': self.certified,
            'delta': self.delta,
            'window': self.window,
        }


def entropy_estimate(shift, n, delta=0.05, window=3):
    """
    Growth statistics of the language at length n.

    Positive entropy is certified when the growth ratio stays at or above
    ``1 + delta`` for the last ``window`` lengths up to n.
    """
    if n < 2:
        raise InvalidParameters('entropy estimate needs n >= 2', n=n)
    if window < 1:
        raise InvalidParameters('window must be positive', window=window)
    rows = growth_table(shift, n)
    _, count, ratio, log_growth = rows[-1]
    trailing = rows[max(1, n - window):]
    certified = all(row[2] >= 1 + delta for row in trailing)
    logger.info('entropy estimate at n=%d: ratio %.6f, certified=%s', n, ratio, certified)
    return EntropyEstimate(
        n=n, count=count, log_growth=log_growth, ratio=ratio,
        certified=certified, delta=delta, window=window, rows=rows,
    )


def periodic_point_legal(shift, word, gap):
    """Legality of the bi-infinite point ...w 0^v w 0^v..."""
    shift = build_subshift(shift)
    if len(word) == 0:
        raise InvalidParameters('periodic block must be nonempty')
    if gap < 0:
        raise InvalidParameters('gap must be non-negative', gap=gap)
    shift.alphabet.check(word)
    period = word + Word.zeros(gap)
    reps = 3
    memory = getattr(shift, 'memory', 0)
    if memory:
        reps = max(reps, 2 + math.ceil((memory + 1) / len(period)))
    return shift.is_legal(period * reps)


def random_legal_word(shift, n, rng, attempts=64):
    """Grow a legal word symbol by symbol, picking uniformly among allowed ones"""
    shift = build_subshift(shift)
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    symbols = shift.alphabet.symbols
    for _ in range(attempts):
        state = shift.initial_state()
        out = []
        while len(out) < n:
            options = []
            for symbol in symbols:
                following = shift.step(state, symbol)
                if following is not None:
                    options.append((symbol, following))
            if not options:
                break
            symbol, state = options[int(rng.integers(len(options)))]
            out.append(symbol)
        if len(out) == n:
            return Word(out)
    raise InvalidParameters('could not grow a legal word of this length', n=n)
