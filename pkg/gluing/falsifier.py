"""
Exhaustive search for an approximate-product gluing of two long words.

Given ``w = 1^(n-g-1) 0^(g+1)`` and ``u = 1^n`` the search tries every
``ŵ`` within Hamming distance ``g`` of ``w``, every ``û`` within ``g`` of
``u`` and every connector of length at most ``f``, and returns the first
legal ``ŵ v û`` it meets. Connectors are explored breadth-first through the
legality automaton, keeping only the lexicographically first connector per
automaton state, so a state rejected once is never revisited.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from django.conf import settings

from core.exceptions import BudgetExceeded, InvalidParameters
from shiftspace.subshifts import build_subshift
from words.codec import to_compact
from words.sequences import Word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AppWitness:
    w_hat: Word
    connector: Word
    u_hat: Word
    w_changes: int
    u_changes: int

    @property
    def word(self):
        return self.w_hat + self.connector + self.u_hat

    def to_dict(self):
        return {
            'w_hat': to_compact(self.w_hat),
            'connector': to_compact(self.connector),
            'u_hat': to_compact(self.u_hat),
            'w_changes': self.w_changes,
            'u_changes': self.u_changes,
        }


def falsifier_words(n, g_budget):
    """The pair (1^(n-g-1) 0^(g+1), 1^n) the search starts from"""
    w = Word.constant(1, n - g_budget - 1) + Word.zeros(g_budget + 1)
    return w, Word.constant(1, n)


def hamming_variants(word, radius, symbols):
    """Words within Hamming distance ``radius``, by distance then position then symbol"""
    base = list(word)
    yield 0, word
    for changes in range(1, radius + 1):
        for positions in itertools.combinations(range(len(base)), changes):
            choices = [[s for s in symbols if s != base[p]] for p in positions]
            for replacement in itertools.product(*choices):
                variant = list(base)
                for p, s in zip(positions, replacement):
                    variant[p] = s
                yield changes, Word(variant)


def search_size(n, f_budget, g_budget, alphabet_size):
    """Upper bound on the candidate triples the search may visit"""
    variants = sum(math.comb(n, i) * (alphabet_size - 1) ** i for i in range(g_budget + 1))
    connectors = sum(alphabet_size ** length for length in range(f_budget + 1))
    return variants * variants * connectors


def _connector_levels(shift, state, f_budget):
    """Yield (connector, state) breadth-first, first connector per new state"""
    seen = {state}
    level = [((), state)]
    yield Word.empty(), state
    for _ in range(f_budget):
        following_level = []
        for connector, current in level:
            for symbol in shift.alphabet:
                following = shift.step(current, symbol)
                if following is None or following in seen:
                    continue
                seen.add(following)
                extended = connector + (symbol,)
                following_level.append((extended, following))
                yield Word(extended), following
        level = following_level
        if not level:
            return


def _search_from(shift, changes, w_hat, u_variants, f_budget):
    state = shift.run(w_hat)
    if state is None:
        return None
    for connector, current in _connector_levels(shift, state, f_budget):
        for u_changes, u_hat in u_variants:
            if shift.run(u_hat, current) is not None:
                return AppWitness(w_hat, connector, u_hat, changes, u_changes)
    return None


def app_falsifier(shift, n, f_budget, g_budget, threads=None):
    """Return a legal ŵ v û for the falsifier pair, or None if none exists"""
    shift = build_subshift(shift)
    if f_budget < 0 or g_budget < 0:
        raise InvalidParameters('budgets must be non-negative', f=f_budget, g=g_budget)
    if n < 2 * g_budget + 2:
        raise InvalidParameters('need n >= 2g + 2', n=n, g=g_budget)
    size = search_size(n, f_budget, g_budget, shift.alphabet.size)
    budget = settings.ERGOLAB['SEARCH_BUDGET']
    if size > budget:
        raise BudgetExceeded('search is larger than the configured budget', size=size, budget=budget)
    w, u = falsifier_words(n, g_budget)
    shift.alphabet.check(w)
    shift.alphabet.check(u)
    symbols = shift.alphabet.symbols
    u_variants = [(c, v) for c, v in hamming_variants(u, g_budget, symbols) if shift.is_legal(v)]
    w_variants = [(c, v) for c, v in hamming_variants(w, g_budget, symbols) if shift.is_legal(v)]
    logger.debug('%d legal w-variants, %d legal u-variants', len(w_variants), len(u_variants))

    def task(item):
        return _search_from(shift, item[0], item[1], u_variants, f_budget)

    threads = max(1, int(threads or settings.ERGOLAB['THREADS']))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = list(pool.map(task, w_variants))
        witness = next((item for item in found if item is not None), None)
    else:
        witness = next((hit for hit in map(task, w_variants) if hit is not None), None)
    logger.info(
        'app falsifier n=%d f=%d g=%d: %s', n, f_budget, g_budget,
        'witness found' if witness else 'no witness',
    )
    return witness
